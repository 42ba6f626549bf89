#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wiresense/force_models.hpp"
#include "wiresense/log_ingestion.hpp"

namespace wiresense {

// Synthetic traversals through parameterized vegetation, producing the same
// log formats the ingestion pipeline reads plus a ground-truth force trace.
// Closing the loop through the estimator validates the whole chain.

// A stiff stem at a fixed spot. It pushes back proportionally to how far the
// wire line has advanced past it, up to a yield force, and snaps (stops
// pushing for good) once the robot origin reaches it.
struct StemObstacle {
  double x_m = 0.0;
  double y_m = 0.0;
  double stiffness_n_per_m = 0.0;
  double yield_n = 0.0;
};

// A rectangle of dense soft vegetation loading the wire uniformly. The load
// scales with the fraction of the wire span inside the rectangle.
struct PatchObstacle {
  double x_min_m = 0.0;
  double y_min_m = 0.0;
  double x_max_m = 0.0;
  double y_max_m = 0.0;
  double density_n_per_m = 0.0;
};

struct Scene {
  std::vector<StemObstacle> stems;
  std::vector<PatchObstacle> patches;
  double noise_std_m = 0.0; // gaussian noise on emitted elongation
  std::uint64_t seed = 0;

  void validate(const WireConfig& cfg) const;
};

struct Trajectory {
  std::vector<Point2> waypoints;
  double speed_mps = 1.0;
  double rate_hz = 10.0;

  void validate() const;
};

enum class SimModel { kNone, kPoint, kHomogeneous };
std::string to_string(SimModel model);

struct TruthRecord {
  double t_sec = 0.0;
  double total_force_n = 0.0; // before noise, capped at the model limit
  SimModel model = SimModel::kNone;
  bool saturated = false;
};

struct SimulationResult {
  std::vector<ElongationSample> sensor; // noisy elongation, clamped at zero
  std::vector<PoseRecord> poses;
  std::vector<TruthRecord> truth;
};

// Drives the robot along the trajectory at constant speed, sampling at the
// given rate, and converts engaged obstacles into elongation readings through
// the inverse contact models. Deterministic for a fixed scene seed.
SimulationResult simulate(const Scene& scene, const Trajectory& trajectory,
                          const WireConfig& cfg);

struct RoundTripReport {
  long engaged_samples = 0;
  double rms_relative_error = 0.0;
  double max_relative_error = 0.0;
};

// Noise-free simulation followed by re-estimation with the given contact
// model; errors are relative to ground truth over engaged timesteps.
RoundTripReport round_trip_report(const Scene& scene, const Trajectory& trajectory,
                                  const WireConfig& cfg, ContactModel estimator);

Scene load_scene_json(const std::filesystem::path& path);
Trajectory load_trajectory_json(const std::filesystem::path& path);

// CSV renderings in the ingestion schemas (the sensor log is the calibrated
// t_sec,elongation_m form).
std::string sensor_log_to_csv(const std::vector<ElongationSample>& sensor);
std::string pose_log_to_csv(const std::vector<PoseRecord>& poses);
std::string truth_log_to_csv(const std::vector<TruthRecord>& truth);

}  // namespace wiresense
