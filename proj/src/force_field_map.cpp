#include "wiresense/force_field_map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wiresense/detail/format.hpp"

namespace wiresense {

namespace {

// Wire-frame sample: distance u along the undeflected span, deflection d.
struct WireFramePoint {
  double u = 0.0;
  double d = 0.0;
};

std::vector<WireFramePoint> straight_samples(double rest_length, int samples) {
  std::vector<WireFramePoint> pts(samples);
  for (int j = 0; j < samples; ++j)
    pts[j] = {rest_length * j / (samples - 1), 0.0};
  return pts;
}

std::vector<WireFramePoint> point_samples(const PointContact& c, double deformed_length,
                                          double rest_length, int samples) {
  if (c.y0_m <= 0.0) return straight_samples(rest_length, samples);
  // Walk the two-leg polyline (0,0) -> (x0,y0) -> (L,0) by arc length.
  const double leg1 = std::hypot(c.x0_m, c.y0_m);
  std::vector<WireFramePoint> pts(samples);
  for (int j = 0; j < samples; ++j) {
    const double s = deformed_length * j / (samples - 1);
    if (s <= leg1) {
      const double w = s / leg1;
      pts[j] = {w * c.x0_m, w * c.y0_m};
    } else {
      const double w = std::min(1.0, (s - leg1) / (deformed_length - leg1));
      pts[j] = {c.x0_m + w * (rest_length - c.x0_m), (1.0 - w) * c.y0_m};
    }
  }
  return pts;
}

std::vector<WireFramePoint> arc_samples(const HomogeneousLoad& h, double rest_length,
                                        int samples) {
  if (h.curvature_per_m < 1e-12) return straight_samples(rest_length, samples);
  // Circular arc over the chord [0, L]: radius R, half angle from the chord.
  const double radius = 1.0 / h.curvature_per_m;
  const double half_angle =
      std::asin(std::min(1.0, 0.5 * h.curvature_per_m * rest_length));
  const double mid = 0.5 * rest_length;
  const double cos_half = std::cos(half_angle);
  std::vector<WireFramePoint> pts(samples);
  for (int j = 0; j < samples; ++j) {
    const double a = -half_angle + 2.0 * half_angle * j / (samples - 1);
    pts[j] = {mid + radius * std::sin(a), radius * (std::cos(a) - cos_half)};
  }
  return pts;
}

}  // namespace

bool ForceFieldMap::cell_of(const Point2& p, int& row, int& col) const {
  const double fx = std::floor((p.x - spec.origin_x_m) / spec.resolution_m);
  const double fy = std::floor((p.y - spec.origin_y_m) / spec.resolution_m);
  if (!(fx >= 0.0 && fx < spec.width && fy >= 0.0 && fy < spec.height))
    return false;
  col = static_cast<int>(fx);
  row = static_cast<int>(fy);
  return true;
}

WireFootprint wire_footprint(const PoseRecord& pose, const ForceEstimate& estimate,
                             double elongation_m, const WireConfig& cfg,
                             int samples) {
  cfg.validate();
  if (samples < 2) throw std::invalid_argument("footprint needs at least 2 samples");
  if (!(elongation_m >= 0.0))
    throw std::domain_error("negative elongation; clamp slack readings upstream");

  const double L = cfg.rest_length_m;
  std::vector<WireFramePoint> wire;
  if (const auto* c = std::get_if<PointContact>(&estimate.detail))
    wire = point_samples(*c, L + elongation_m, L, samples);
  else
    wire = arc_samples(std::get<HomogeneousLoad>(estimate.detail), L, samples);

  const double cos_yaw = std::cos(pose.yaw_rad);
  const double sin_yaw = std::sin(pose.yaw_rad);
  WireFootprint fp;
  fp.points.resize(wire.size());
  for (std::size_t j = 0; j < wire.size(); ++j) {
    // Robot frame: wire line ahead by the forward offset, deflection pulls it
    // back toward the robot; u runs across the span.
    const double rx = cfg.forward_offset_m - wire[j].d;
    const double ry = wire[j].u - 0.5 * L;
    fp.points[j] = {pose.x_m + rx * cos_yaw - ry * sin_yaw,
                    pose.y_m + rx * sin_yaw + ry * cos_yaw};
  }
  return fp;
}

void accumulate(ForceFieldMap& map, const WireFootprint& footprint,
                double total_force_n) {
  if (footprint.points.empty())
    throw std::invalid_argument("footprint has no points");
  if (!(total_force_n >= 0.0))
    throw std::domain_error("negative force cannot be accumulated");
  // Each reading touches each cell at most once, however many footprint
  // points land in it.
  std::vector<std::size_t> cells;
  cells.reserve(footprint.points.size());
  for (const Point2& p : footprint.points) {
    int row = 0;
    int col = 0;
    if (map.cell_of(p, row, col))
      cells.push_back(map.index(row, col));
    else
      ++map.out_of_bounds_points;
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  for (const std::size_t i : cells) {
    map.sum_n[i] += total_force_n;
    map.count[i] += 1;
  }
}

ForceFieldMap build_map(const std::vector<StampedSample>& samples,
                        ContactModel model, const WireConfig& cfg,
                        const std::optional<GridSpec>& grid,
                        double auto_resolution_m, int footprint_samples,
                        double x0_m) {
  cfg.validate();
  if (samples.empty()) throw std::invalid_argument("no aligned samples to map");
  if (!(auto_resolution_m > 0.0))
    throw std::invalid_argument("auto_resolution_m must be positive");
  const double x0 = std::isnan(x0_m) ? 0.5 * cfg.rest_length_m : x0_m;

  std::vector<ForceEstimate> estimates;
  std::vector<WireFootprint> footprints;
  estimates.reserve(samples.size());
  footprints.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      estimates.push_back(
          estimate_force(samples[i].elongation_m, model, cfg, x0));
      footprints.push_back(wire_footprint(samples[i].pose, estimates.back(),
                                          samples[i].elongation_m, cfg,
                                          footprint_samples));
    } catch (const std::domain_error& e) {
      throw std::domain_error("sample " + std::to_string(i) + ": " + e.what());
    }
  }

  GridSpec spec;
  if (grid) {
    spec = *grid;
    spec.validate();
  } else {
    double min_x = footprints[0].points[0].x;
    double max_x = min_x;
    double min_y = footprints[0].points[0].y;
    double max_y = min_y;
    for (const auto& fp : footprints) {
      for (const Point2& p : fp.points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
      }
    }
    spec.resolution_m = auto_resolution_m;
    spec.origin_x_m = min_x - auto_resolution_m; // one cell of padding
    spec.origin_y_m = min_y - auto_resolution_m;
    spec.width =
        static_cast<int>(std::floor((max_x - spec.origin_x_m) / auto_resolution_m)) + 2;
    spec.height =
        static_cast<int>(std::floor((max_y - spec.origin_y_m) / auto_resolution_m)) + 2;
  }

  ForceFieldMap map(spec);
  for (std::size_t i = 0; i < samples.size(); ++i)
    accumulate(map, footprints[i], estimates[i].total_force_n);
  return map;
}

std::string map_to_csv(const ForceFieldMap& map) {
  std::string out;
  out += "# origin_x_m=";
  detail::append_fixed(out, map.spec.origin_x_m, 6);
  out += "\n# origin_y_m=";
  detail::append_fixed(out, map.spec.origin_y_m, 6);
  out += "\n# resolution_m=";
  detail::append_fixed(out, map.spec.resolution_m, 6);
  out += "\nrow,col,mean_n,count\n";
  for (int row = 0; row < map.spec.height; ++row) {
    for (int col = 0; col < map.spec.width; ++col) {
      const auto mean = map.mean_n(row, col);
      if (!mean) continue;
      out += std::to_string(row);
      out += ',';
      out += std::to_string(col);
      out += ',';
      detail::append_fixed(out, *mean, 6);
      out += ',';
      out += std::to_string(map.count[map.index(row, col)]);
      out += '\n';
    }
  }
  return out;
}

namespace {

std::string pgm_render(const ForceFieldMap& map,
                       const std::function<int(std::size_t)>& level) {
  std::string out = "P2\n";
  out += std::to_string(map.spec.width);
  out += ' ';
  out += std::to_string(map.spec.height);
  out += "\n255\n";
  // Image rows run top to bottom; grid row 0 is the bottom edge.
  for (int row = map.spec.height - 1; row >= 0; --row) {
    for (int col = 0; col < map.spec.width; ++col) {
      if (col > 0) out += ' ';
      out += std::to_string(level(map.index(row, col)));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string map_to_pgm(const ForceFieldMap& map, double full_scale_n) {
  if (!(full_scale_n > 0.0))
    throw std::invalid_argument("full_scale_n must be positive");
  return pgm_render(map, [&](std::size_t i) {
    if (map.count[i] == 0) return 0;
    const double mean = map.sum_n[i] / static_cast<double>(map.count[i]);
    const double scaled = std::clamp(mean / full_scale_n, 0.0, 1.0);
    return static_cast<int>(std::lround(scaled * 255.0));
  });
}

std::string map_mask_to_pgm(const ForceFieldMap& map) {
  return pgm_render(map, [&](std::size_t i) { return map.count[i] > 0 ? 255 : 0; });
}

}  // namespace wiresense
