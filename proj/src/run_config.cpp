#include "wiresense/run_config.hpp"

#include <fstream>

#include <json.hpp>

namespace wiresense {

void RunConfig::validate() const {
  wire.validate();
  calibration.validate();
  if (!std::isnan(x0_m) && !(x0_m >= 0.0 && x0_m <= wire.rest_length_m))
    throw std::invalid_argument("x0_m outside the wire span [0, L]");
  if (grid) grid->validate();
  if (!(grid_resolution_m > 0.0))
    throw std::invalid_argument("grid_resolution_m must be positive");
  if (smoothing_window < 1 || smoothing_window % 2 == 0)
    throw std::invalid_argument("smoothing_window must be odd and at least 1");
  if (footprint_samples < 2)
    throw std::invalid_argument("footprint_samples must be at least 2");
}

ContactModel parse_contact_model(const std::string& name) {
  if (name == "point-midspan") return ContactModel::kPointMidspan;
  if (name == "homogeneous") return ContactModel::kHomogeneous;
  throw std::invalid_argument("unknown contact model \"" + name +
                              "\" (expected point-midspan or homogeneous)");
}

RunConfig load_run_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }

  RunConfig cfg;
  try {
    if (doc.contains("wire")) {
      const auto& w = doc.at("wire");
      cfg.wire.rest_length_m = w.value("rest_length_m", cfg.wire.rest_length_m);
      cfg.wire.tension_n = w.value("tension_n", cfg.wire.tension_n);
      cfg.wire.mount_height_m = w.value("mount_height_m", cfg.wire.mount_height_m);
      cfg.wire.forward_offset_m =
          w.value("forward_offset_m", cfg.wire.forward_offset_m);
    }
    if (doc.contains("calibration")) {
      const auto& c = doc.at("calibration");
      cfg.calibration.full_scale_m =
          c.value("full_scale_m", cfg.calibration.full_scale_m);
      cfg.calibration.zero_offset =
          c.value("zero_offset", cfg.calibration.zero_offset);
    }
    if (doc.contains("model"))
      cfg.model = parse_contact_model(doc.at("model").get<std::string>());
    if (doc.contains("x0_m")) cfg.x0_m = doc.at("x0_m");
    if (doc.contains("grid")) {
      const auto& g = doc.at("grid");
      cfg.grid_resolution_m = g.value("resolution_m", cfg.grid_resolution_m);
      if (g.contains("width")) {
        // A full grid spec pins the map bounds instead of auto-computing them.
        GridSpec spec;
        spec.resolution_m = cfg.grid_resolution_m;
        spec.origin_x_m = g.at("origin_x_m");
        spec.origin_y_m = g.at("origin_y_m");
        spec.width = g.at("width");
        spec.height = g.at("height");
        cfg.grid = spec;
      }
    }
    cfg.smoothing_window = doc.value("smoothing_window", cfg.smoothing_window);
    cfg.footprint_samples = doc.value("footprint_samples", cfg.footprint_samples);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return cfg;
}

}  // namespace wiresense
