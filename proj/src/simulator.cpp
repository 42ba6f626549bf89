#include "wiresense/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "wiresense/detail/format.hpp"

namespace wiresense {

namespace {

struct PathSegment {
  Point2 start;
  double dir_x = 0.0;
  double dir_y = 0.0;
  double length = 0.0;
  double cum_start = 0.0; // path distance at the segment start
};

std::vector<PathSegment> build_path(const Trajectory& traj) {
  std::vector<PathSegment> segs;
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < traj.waypoints.size(); ++i) {
    const Point2& a = traj.waypoints[i];
    const Point2& b = traj.waypoints[i + 1];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0.0) continue; // repeated waypoint
    segs.push_back({a, (b.x - a.x) / len, (b.y - a.y) / len, len, cum});
    cum += len;
  }
  return segs;
}

PoseRecord pose_at(const std::vector<PathSegment>& segs, std::size_t& hint,
                   double dist, double t) {
  while (hint + 1 < segs.size() &&
         dist >= segs[hint].cum_start + segs[hint].length)
    ++hint;
  const PathSegment& s = segs[hint];
  const double along = std::min(dist - s.cum_start, s.length);
  PoseRecord p;
  p.t_sec = t;
  p.x_m = s.start.x + s.dir_x * along;
  p.y_m = s.start.y + s.dir_y * along;
  p.yaw_rad = std::atan2(s.dir_y, s.dir_x);
  return p;
}

// Fraction of the segment a-b inside the rectangle (Liang-Barsky clipping).
double span_fraction_in_rect(const Point2& a, const Point2& b,
                             const PatchObstacle& r) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  double u0 = 0.0;
  double u1 = 1.0;
  const auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double u = q / p;
    if (p < 0.0)
      u0 = std::max(u0, u);
    else
      u1 = std::min(u1, u);
    return true;
  };
  if (!clip(-dx, a.x - r.x_min_m)) return 0.0;
  if (!clip(dx, r.x_max_m - a.x)) return 0.0;
  if (!clip(-dy, a.y - r.y_min_m)) return 0.0;
  if (!clip(dy, r.y_max_m - a.y)) return 0.0;
  return std::max(0.0, u1 - u0);
}

}  // namespace

void Scene::validate(const WireConfig& cfg) const {
  cfg.validate();
  if (!(noise_std_m >= 0.0))
    throw std::invalid_argument("scene noise_std_m must be non-negative");
  for (const auto& s : stems) {
    if (!(s.stiffness_n_per_m > 0.0))
      throw std::invalid_argument("stem stiffness_n_per_m must be positive");
    if (!(s.yield_n > 0.0 && s.yield_n < cfg.max_total_force_n()))
      throw std::invalid_argument("stem yield_n must lie in (0, 2T)");
  }
  for (const auto& p : patches) {
    if (!(p.x_max_m > p.x_min_m && p.y_max_m > p.y_min_m))
      throw std::invalid_argument("patch rectangle is degenerate");
    if (!(p.density_n_per_m >= 0.0))
      throw std::invalid_argument("patch density_n_per_m must be non-negative");
  }
}

void Trajectory::validate() const {
  if (waypoints.size() < 2)
    throw std::invalid_argument("trajectory needs at least two waypoints");
  if (!(speed_mps > 0.0))
    throw std::invalid_argument("trajectory speed_mps must be positive");
  if (!(rate_hz > 0.0))
    throw std::invalid_argument("trajectory rate_hz must be positive");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
    total += std::hypot(waypoints[i + 1].x - waypoints[i].x,
                        waypoints[i + 1].y - waypoints[i].y);
  if (!(total > 0.0))
    throw std::invalid_argument("trajectory has zero path length");
}

std::string to_string(SimModel model) {
  switch (model) {
    case SimModel::kNone: return "none";
    case SimModel::kPoint: return "point";
    case SimModel::kHomogeneous: return "homogeneous";
  }
  return "none";
}

SimulationResult simulate(const Scene& scene, const Trajectory& trajectory,
                          const WireConfig& cfg) {
  scene.validate(cfg);
  trajectory.validate();

  const std::vector<PathSegment> segs = build_path(trajectory);
  const double total_length =
      segs.back().cum_start + segs.back().length;
  const long steps = static_cast<long>(std::floor(
                         total_length / trajectory.speed_mps * trajectory.rate_hz +
                         1e-9)) +
                     1;

  const double L = cfg.rest_length_m;
  const double half_span = 0.5 * L;
  const double offset = cfg.forward_offset_m;
  const double force_cap = cfg.max_total_force_n();
  const double load_cap = cfg.max_load_n_per_m();
  // Point saturation has no finite elongation; the physical spool runs out of
  // wire instead, so emit a fixed spool-limit elongation there.
  const double spool_limit = 2.0 * L;

  std::vector<char> broken(scene.stems.size(), 0);
  std::mt19937_64 rng(scene.seed);
  std::normal_distribution<double> noise(0.0, scene.noise_std_m);

  SimulationResult out;
  out.sensor.reserve(steps);
  out.poses.reserve(steps);
  out.truth.reserve(steps);

  std::size_t hint = 0;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / trajectory.rate_hz;
    const double dist = std::min(trajectory.speed_mps * t, total_length);
    const PoseRecord pose = pose_at(segs, hint, dist, t);

    const double cos_yaw = std::cos(pose.yaw_rad);
    const double sin_yaw = std::sin(pose.yaw_rad);
    // Lateral unit vector and the wire line's straight endpoints.
    const double nx = -sin_yaw;
    const double ny = cos_yaw;
    const Point2 wire_center{pose.x_m + offset * cos_yaw,
                             pose.y_m + offset * sin_yaw};
    const Point2 wire_a{wire_center.x - half_span * nx,
                        wire_center.y - half_span * ny};
    const Point2 wire_b{wire_center.x + half_span * nx,
                        wire_center.y + half_span * ny};

    double stem_force = 0.0;
    for (std::size_t i = 0; i < scene.stems.size(); ++i) {
      if (broken[i]) continue;
      const StemObstacle& stem = scene.stems[i];
      const double rel_x = stem.x_m - pose.x_m;
      const double rel_y = stem.y_m - pose.y_m;
      const double ahead = rel_x * cos_yaw + rel_y * sin_yaw;
      const double lateral = rel_x * nx + rel_y * ny;
      if (ahead <= 0.0) {
        // The robot origin has reached the stem: it snaps and stays broken.
        broken[i] = 1;
        continue;
      }
      if (std::abs(lateral) > half_span) continue;
      const double advance = offset - ahead; // wire pushed past the stem
      if (advance <= 0.0) continue;
      stem_force += std::min(stem.stiffness_n_per_m * advance, stem.yield_n);
    }

    double patch_load = 0.0;
    for (const PatchObstacle& patch : scene.patches)
      patch_load +=
          patch.density_n_per_m * span_fraction_in_rect(wire_a, wire_b, patch);

    const bool stems_engaged = stem_force > 0.0;
    const bool patches_engaged = patch_load > 0.0;

    TruthRecord truth;
    truth.t_sec = t;
    double elongation = 0.0;
    if (stems_engaged && !patches_engaged) {
      truth.model = SimModel::kPoint;
      if (stem_force >= force_cap) {
        truth.saturated = true;
        truth.total_force_n = force_cap;
        elongation = spool_limit;
      } else {
        truth.total_force_n = stem_force;
        elongation = elongation_from_point_force(stem_force, half_span, cfg);
      }
    } else if (patches_engaged) {
      // Any patch involvement (with or without stems) acts as a distributed
      // load; concurrent stem force folds into it.
      truth.model = SimModel::kHomogeneous;
      double load = patch_load + stem_force / L;
      if (load > load_cap) {
        truth.saturated = true;
        load = load_cap;
        elongation = cfg.saturation_elongation_m();
      } else {
        elongation = elongation_from_load(load, cfg);
      }
      truth.total_force_n = std::min(load * L, force_cap);
      if (truth.saturated) truth.total_force_n = force_cap;
    }

    double emitted = elongation;
    if (scene.noise_std_m > 0.0) emitted = std::max(0.0, emitted + noise(rng));

    out.sensor.push_back({t, emitted});
    out.poses.push_back(pose);
    out.truth.push_back(truth);
  }
  return out;
}

RoundTripReport round_trip_report(const Scene& scene, const Trajectory& trajectory,
                                  const WireConfig& cfg, ContactModel estimator) {
  Scene clean = scene;
  clean.noise_std_m = 0.0;
  const SimulationResult sim = simulate(clean, trajectory, cfg);

  RoundTripReport rep;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < sim.truth.size(); ++i) {
    const double truth_force = sim.truth[i].total_force_n;
    if (truth_force <= 1e-9) continue;
    const double est =
        estimate_force(sim.sensor[i].elongation_m, estimator, cfg).total_force_n;
    const double rel = std::abs(est - truth_force) / truth_force;
    sum_sq += rel * rel;
    rep.max_relative_error = std::max(rep.max_relative_error, rel);
    ++rep.engaged_samples;
  }
  if (rep.engaged_samples > 0)
    rep.rms_relative_error = std::sqrt(sum_sq / rep.engaged_samples);
  return rep;
}

namespace {

nlohmann::json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

}  // namespace

Scene load_scene_json(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_json_file(path);
  Scene scene;
  try {
    for (const auto& s : doc.value("stems", nlohmann::json::array())) {
      StemObstacle stem;
      stem.x_m = s.at("x");
      stem.y_m = s.at("y");
      stem.stiffness_n_per_m = s.at("stiffness_n_per_m");
      stem.yield_n = s.at("yield_n");
      scene.stems.push_back(stem);
    }
    for (const auto& p : doc.value("patches", nlohmann::json::array())) {
      PatchObstacle patch;
      patch.x_min_m = p.at("x_min");
      patch.y_min_m = p.at("y_min");
      patch.x_max_m = p.at("x_max");
      patch.y_max_m = p.at("y_max");
      patch.density_n_per_m = p.at("density_n_per_m");
      scene.patches.push_back(patch);
    }
    scene.noise_std_m = doc.value("noise_std_m", 0.0);
    scene.seed = doc.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return scene;
}

Trajectory load_trajectory_json(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_json_file(path);
  Trajectory traj;
  try {
    for (const auto& wp : doc.at("waypoints")) {
      if (!wp.is_array() || wp.size() != 2)
        throw ParseError(path.string(), 0, "waypoints must be [x, y] pairs");
      traj.waypoints.push_back({wp[0].get<double>(), wp[1].get<double>()});
    }
    traj.speed_mps = doc.value("speed_mps", 1.0);
    traj.rate_hz = doc.value("rate_hz", 10.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return traj;
}

std::string sensor_log_to_csv(const std::vector<ElongationSample>& sensor) {
  std::string out = "t_sec,elongation_m\n";
  for (const auto& s : sensor) {
    detail::append_fixed(out, s.t_sec, 6);
    out += ',';
    detail::append_fixed(out, s.elongation_m, 9);
    out += '\n';
  }
  return out;
}

std::string pose_log_to_csv(const std::vector<PoseRecord>& poses) {
  std::string out = "t_sec,x_m,y_m,yaw_rad\n";
  for (const auto& p : poses) {
    detail::append_fixed(out, p.t_sec, 6);
    out += ',';
    detail::append_fixed(out, p.x_m, 6);
    out += ',';
    detail::append_fixed(out, p.y_m, 6);
    out += ',';
    detail::append_fixed(out, p.yaw_rad, 6);
    out += '\n';
  }
  return out;
}

std::string truth_log_to_csv(const std::vector<TruthRecord>& truth) {
  std::string out = "t_sec,total_force_n,model,saturated\n";
  for (const auto& r : truth) {
    detail::append_fixed(out, r.t_sec, 6);
    out += ',';
    detail::append_fixed(out, r.total_force_n, 6);
    out += ',';
    out += to_string(r.model);
    out += ',';
    out += r.saturated ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace wiresense
