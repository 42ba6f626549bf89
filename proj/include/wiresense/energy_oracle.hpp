#pragma once

#include <variant>
#include <vector>

#include "wiresense/types.hpp"

namespace wiresense {

// Discrete potential-energy model of the wire, used to cross-check the
// closed-form contact solutions. The wire is a polyline pinned at (0, 0) and
// (L, 0); its energy is the spring work T * (deformed length) minus the work
// done by the vegetation load on the deflection. Minimizing that energy under
// the measured-length constraint reproduces the triangle and arc shapes
// independently of the closed forms.

struct WireShape {
  std::vector<Point2> nodes; // x strictly increasing, endpoints pinned
  int segment_count() const { return static_cast<int>(nodes.size()) - 1; }
  double polyline_length() const;
};

struct PointLoad {
  double x0_m = 0.0;
  double force_n = 0.0;
};

struct UniformLoad {
  double load_n_per_m = 0.0;
};

// monostate means an unloaded wire.
using LoadSpec = std::variant<std::monostate, PointLoad, UniformLoad>;

struct EnergyBreakdown {
  double spring_j = 0.0;     // tension * polyline length
  double vegetation_j = 0.0; // -integral of load * deflection
  double total_j = 0.0;
};

EnergyBreakdown discrete_energy(const WireShape& shape, const LoadSpec& load,
                                const WireConfig& cfg);

// Minimization did not reach a constrained local minimum within the iteration
// cap; the message carries the residuals.
class MinimizeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MinimizeReport {
  WireShape shape;
  int iterations = 0;             // gradient steps attempted
  double final_energy_j = 0.0;
  double length_residual_m = 0.0; // |polyline length - (L + l)|
  // Most negative energy change found by re-projected single-node
  // perturbations of the result; >= 0 means none improves on it.
  double worst_perturbation_gain_j = 0.0;
  std::vector<double> energy_trace; // accepted-step energies, non-increasing
};

// Projected gradient descent on the interior node deflections: take a step,
// rescale the deflections so the polyline length matches L + l again, keep the
// step only if the energy did not rise. Deterministic for fixed inputs.
MinimizeReport minimize_energy_report(const LoadSpec& load, double elongation_m,
                                      int segment_count, const WireConfig& cfg,
                                      int max_iterations = 100000);

// As above but returns just the shape, throwing MinimizeFailure unless the
// result passes the length and local-minimum checks.
WireShape minimize_energy(const LoadSpec& load, double elongation_m,
                          int segment_count, const WireConfig& cfg,
                          int max_iterations = 100000);

// |dU/dy0| / T of the point-contact energy, evaluated at the closed-form apex
// by central differences over the triangular family. Zero elongation sits on
// the y0 >= 0 boundary, where only a negative one-sided slope counts as a
// violation. force_scale perturbs the closed-form force before the check and
// exists so report tooling can prove the check is live.
double stationarity_residual(double elongation_m, double x0_m, const WireConfig& cfg,
                             double step_m = 1e-6, double force_scale = 1.0);

// Energy change of the best among `count` random length-preserving shape
// perturbations (every interior node jittered by up to magnitude_m, then
// re-projected). A non-negative result means none of them beats the shape.
double perturbation_sweep_min_gain(const WireShape& shape, const LoadSpec& load,
                                   const WireConfig& cfg, int count,
                                   double magnitude_m, unsigned seed);

}  // namespace wiresense
