#pragma once

#include <variant>

#include "wiresense/types.hpp"

namespace wiresense {

// Closed-form contact models mapping wire elongation to force.
//
// Two contact regimes are supported. A single stiff stem touching the wire at
// one point pulls it into a triangle; dense soft vegetation loads the wire
// uniformly and bends it into a circular arc. Both follow from minimizing the
// wire's potential energy at constant tension, and both are invertible, so
// forces can be recovered from the measured elongation alone.

// Triangle solution for one point contact at x0 along the span.
struct PointContact {
  double x0_m = 0.0;    // contact position along the undeflected span [0, L]
  double y0_m = 0.0;    // apex deflection
  double force_n = 0.0; // force pushing on the contact, < 2T
};

// Circular-arc solution for a uniform distributed load.
struct HomogeneousLoad {
  double curvature_per_m = 0.0;   // arc curvature, in [0, 2/L]
  double central_angle_rad = 0.0; // curvature * deformed length
  double load_n_per_m = 0.0;      // distributed load, tension * curvature
  double total_force_n = 0.0;     // load * rest span, capped at 2T
  bool saturated = false;         // wire bent to a semicircle
};

enum class ContactModel { kPointMidspan, kHomogeneous };

struct ForceEstimate {
  ContactModel model = ContactModel::kHomogeneous;
  double total_force_n = 0.0;
  bool saturated = false;
  std::variant<PointContact, HomogeneousLoad> detail;
};

// Apex deflection of the triangle with side lengths summing to L + l and the
// apex above x0. Symmetric in x0 <-> L - x0.
double y0_from_elongation(double elongation_m, double x0_m, const WireConfig& cfg);

// Full point-contact solution: apex plus the force balancing the two wire legs.
PointContact point_force(double elongation_m, double x0_m, const WireConfig& cfg);

struct CurvatureResult {
  double curvature_per_m = 0.0;
  bool saturated = false; // elongation beyond the semicircle limit
};

// Arc curvature whose chord equals the rest span while the arc length equals
// the deformed length. Bisection on (0, 2/L]; the result reproduces the chord
// to within rel_tol * L (and in practice to machine precision).
CurvatureResult solve_curvature(double elongation_m, const WireConfig& cfg,
                                double rel_tol = 1e-9);

// Distributed-load solution derived from solve_curvature.
HomogeneousLoad homogeneous_load(double elongation_m, const WireConfig& cfg);

// Inverse maps: elongation produced by a given force or load. Throw
// SaturationError at or beyond the model limit, where no finite elongation
// exists.
double elongation_from_point_force(double force_n, double x0_m, const WireConfig& cfg);
double elongation_from_load(double load_n_per_m, const WireConfig& cfg);

// One-call estimator used by the pipeline. x0_m only matters for the point
// model; the overload without it contacts at midspan.
ForceEstimate estimate_force(double elongation_m, ContactModel model,
                             const WireConfig& cfg, double x0_m);
ForceEstimate estimate_force(double elongation_m, ContactModel model,
                             const WireConfig& cfg);

}  // namespace wiresense
