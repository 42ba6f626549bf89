#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace wiresense {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Geometry and tension of the sensing wire. The wire spans the robot's width,
// is held at constant tension by a spring-loaded spool, and deflects backward
// when vegetation pushes on it. Elongation (paid-out wire length) is the one
// measured quantity everything else is derived from.
struct WireConfig {
  double rest_length_m = 0.44;     // undeflected span between the end pulleys
  double tension_n = 2.2;          // constant spool tension
  double mount_height_m = 0.16;    // height above ground, informational
  double forward_offset_m = 0.30;  // wire line ahead of the robot origin

  // Both contact models top out at twice the tension.
  double max_total_force_n() const { return 2.0 * tension_n; }
  // Distributed-load ceiling, reached when the wire is a semicircle.
  double max_load_n_per_m() const { return 2.0 * tension_n / rest_length_m; }
  // Elongation at which the homogeneous model saturates (semicircular wire).
  double saturation_elongation_m() const {
    return rest_length_m * (std::numbers::pi / 2.0 - 1.0);
  }

  void validate() const {
    if (!(rest_length_m > 0.0))
      throw std::invalid_argument("wire rest_length_m must be positive");
    if (!(tension_n > 0.0))
      throw std::invalid_argument("wire tension_n must be positive");
    if (!(mount_height_m >= 0.0))
      throw std::invalid_argument("wire mount_height_m must be non-negative");
  }
};

struct ElongationSample {
  double t_sec = 0.0;
  double elongation_m = 0.0;
};

// A requested force sits at or beyond a model limit, so no finite elongation
// produces it.
class SaturationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input file. Carries the source file and the 1-based line where
// parsing stopped (line 0 when the failure is not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, long line, const std::string& what)
      : std::runtime_error(line > 0 ? file + ":" + std::to_string(line) + ": " + what
                                    : file + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  long line() const { return line_; }

 private:
  std::string file_;
  long line_;
};

}  // namespace wiresense
