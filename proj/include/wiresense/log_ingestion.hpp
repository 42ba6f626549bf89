#pragma once

#include <filesystem>
#include <vector>

#include "wiresense/types.hpp"

namespace wiresense {

// Loading, calibration, and time alignment of recorded sensor and pose logs.
//
// Sensor logs carry either the raw spool potentiometer ratio or, for logs
// written by the simulator, elongation in meters directly. Pose logs come from
// the robot's odometry at their own rate; alignment interpolates a pose for
// every retained sensor timestamp.

struct RawSensorRecord {
  double t_sec = 0.0;
  double raw_ratio = 0.0; // potentiometer reading in [0, 1]
};

struct Calibration {
  double full_scale_m = 1.0; // wire paid out at ratio 1
  double zero_offset = 0.0;  // ratio reported at rest

  void validate() const {
    if (!(full_scale_m > 0.0))
      throw std::invalid_argument("calibration full_scale_m must be positive");
    if (!(zero_offset >= 0.0 && zero_offset < 1.0))
      throw std::invalid_argument("calibration zero_offset outside [0, 1)");
  }
};

struct PoseRecord {
  double t_sec = 0.0;
  double x_m = 0.0;
  double y_m = 0.0;
  double yaw_rad = 0.0; // normalized to (-pi, pi]
};

// One sensor reading with the pose interpolated at its timestamp.
struct StampedSample {
  double t_sec = 0.0;
  PoseRecord pose;
  double elongation_m = 0.0;
};

// Sensor and pose logs share no time span, so nothing can be aligned.
class EmptyOverlapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Maps angles into (-pi, pi].
double wrap_angle(double rad);

// Elongation from a raw reading; ratios below the zero offset mean a slack
// wire and clamp to zero.
double calibrate(const RawSensorRecord& rec, const Calibration& cal);

struct AlignResult {
  std::vector<StampedSample> samples;
  long dropped_outside_span = 0; // sensor records outside the pose time span
  long slack_clamped = 0;        // negative elongations clamped to zero
};

// Pairs every sensor record inside the pose time span with a linearly
// interpolated pose (yaw via the shortest arc). Both sequences must be
// non-empty and strictly increasing in time.
AlignResult align(const std::vector<RawSensorRecord>& sensor,
                  const std::vector<PoseRecord>& poses, const Calibration& cal);

// Same alignment for logs that already carry elongation in meters.
AlignResult align_calibrated(const std::vector<ElongationSample>& sensor,
                             const std::vector<PoseRecord>& poses);

// Centered moving average over elongation with an odd window, truncated at
// the ends. window = 1 returns the input.
std::vector<StampedSample> smooth(const std::vector<StampedSample>& samples,
                                  int window);

// CSV loaders. Headers are checked literally; timestamps must be strictly
// increasing; failures throw ParseError naming the file and line.
std::vector<RawSensorRecord> load_sensor_csv(const std::filesystem::path& path);
std::vector<ElongationSample> load_elongation_csv(const std::filesystem::path& path);
std::vector<PoseRecord> load_pose_csv(const std::filesystem::path& path);

Calibration load_calibration_json(const std::filesystem::path& path);

}  // namespace wiresense
