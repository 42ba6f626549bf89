#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>

#include "wiresense/force_field_map.hpp"

namespace wiresense {

// Pipeline settings shared across the command-line operations. Every field
// has a working default; a JSON config file and command-line flags override
// per run.
struct RunConfig {
  WireConfig wire;
  Calibration calibration;
  ContactModel model = ContactModel::kHomogeneous;
  // Point-contact position; NaN selects midspan.
  double x0_m = std::numeric_limits<double>::quiet_NaN();
  std::optional<GridSpec> grid;    // explicit grid, otherwise auto bounds
  double grid_resolution_m = 0.15; // cell size for auto bounds
  int smoothing_window = 1;
  int footprint_samples = 32;

  double resolved_x0_m() const {
    return std::isnan(x0_m) ? 0.5 * wire.rest_length_m : x0_m;
  }
  void validate() const;
};

ContactModel parse_contact_model(const std::string& name);

// Reads a config file; absent keys keep their defaults.
RunConfig load_run_config_json(const std::filesystem::path& path);

}  // namespace wiresense
