#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wiresense/force_models.hpp"
#include "wiresense/log_ingestion.hpp"

namespace wiresense {

// Rasterized map of vegetation resistance built from aligned drive logs. Each
// reading's force is painted along the wire's deformed footprint in world
// coordinates; cells average every force value painted into them.

struct GridSpec {
  double resolution_m = 0.15;
  double origin_x_m = 0.0; // lower-left corner of cell (row 0, col 0)
  double origin_y_m = 0.0;
  int width = 0;  // columns, along x
  int height = 0; // rows, along y

  void validate() const {
    if (!(resolution_m > 0.0))
      throw std::invalid_argument("grid resolution_m must be positive");
    if (width < 1 || height < 1)
      throw std::invalid_argument("grid must have at least one cell");
  }
};

// World-frame sample points along the deformed wire, endpoints included.
struct WireFootprint {
  std::vector<Point2> points;
};

struct ForceFieldMap {
  GridSpec spec;
  std::vector<double> sum_n;  // per-cell force totals
  std::vector<long> count;    // per-cell contribution counts
  long out_of_bounds_points = 0;

  explicit ForceFieldMap(const GridSpec& s)
      : spec(s),
        sum_n(static_cast<std::size_t>(s.width) * s.height, 0.0),
        count(static_cast<std::size_t>(s.width) * s.height, 0) {
    spec.validate();
  }

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * spec.width + col;
  }
  bool explored(int row, int col) const { return count[index(row, col)] > 0; }
  std::optional<double> mean_n(int row, int col) const {
    const std::size_t i = index(row, col);
    if (count[i] == 0) return std::nullopt;
    return sum_n[i] / static_cast<double>(count[i]);
  }
  // Cell containing a world point; false when outside the grid.
  bool cell_of(const Point2& p, int& row, int& col) const;
};

// Wire shape for one reading, sampled uniformly by arc length and placed in
// the world. The wire spans the robot laterally at the forward offset and
// deflects backward toward the robot.
WireFootprint wire_footprint(const PoseRecord& pose, const ForceEstimate& estimate,
                             double elongation_m, const WireConfig& cfg,
                             int samples);

// Adds one reading: every distinct cell under the footprint receives the full
// force value once. Points outside the grid go to the out-of-bounds tally.
void accumulate(ForceFieldMap& map, const WireFootprint& footprint,
                double total_force_n);

// Full pipeline over aligned samples. Without an explicit grid the bounds are
// computed from the footprints and padded by one cell at auto_resolution_m.
// x0_m defaults to midspan (NaN selects the default).
ForceFieldMap build_map(const std::vector<StampedSample>& samples,
                        ContactModel model, const WireConfig& cfg,
                        const std::optional<GridSpec>& grid = std::nullopt,
                        double auto_resolution_m = 0.15,
                        int footprint_samples = 32,
                        double x0_m = std::numeric_limits<double>::quiet_NaN());

// Deterministic exports. CSV lists explored cells row-major under a metadata
// preamble; PGM renders means scaled to full_scale_n with row 0 at the bottom
// edge of the image; the mask marks explored cells with 255.
std::string map_to_csv(const ForceFieldMap& map);
std::string map_to_pgm(const ForceFieldMap& map, double full_scale_n);
std::string map_mask_to_pgm(const ForceFieldMap& map);

}  // namespace wiresense
