#include "wiresense/force_models.hpp"

#include <cassert>
#include <cmath>

namespace wiresense {

namespace {

// Distances from the contact to the two wire ends, ordered so that mirrored
// contact positions produce bitwise-identical arithmetic.
struct ArmSplit {
  double near;
  double far;
};

ArmSplit split_arms(double x0, double rest_length) {
  const double mirrored = rest_length - x0;
  if (x0 <= mirrored) return {x0, mirrored};
  return {mirrored, x0};
}

void check_contact_inputs(double elongation_m, double x0_m, const WireConfig& cfg) {
  cfg.validate();
  if (!(x0_m >= 0.0 && x0_m <= cfg.rest_length_m))
    throw std::domain_error("contact position outside the wire span [0, L]");
  if (!(elongation_m >= 0.0))
    throw std::domain_error("negative elongation; clamp slack readings upstream");
}

}  // namespace

double y0_from_elongation(double elongation_m, double x0_m, const WireConfig& cfg) {
  check_contact_inputs(elongation_m, x0_m, cfg);
  if (elongation_m == 0.0) return 0.0;
  const double l = elongation_m;
  const double L = cfg.rest_length_m;
  const double a = split_arms(x0_m, L).near;
  // Apex height of the triangle whose two sides sum to L + l:
  //   y0 = sqrt(l (l + 2a)(l + 2L)(l + 2L - 2a)) / (2 (l + L))
  const double p = l * (l + 2.0 * a) * (l + 2.0 * L) * (l + 2.0 * L - 2.0 * a);
  return std::sqrt(std::max(p, 0.0)) / (2.0 * (l + L));
}

PointContact point_force(double elongation_m, double x0_m, const WireConfig& cfg) {
  PointContact c;
  c.x0_m = x0_m;
  c.y0_m = y0_from_elongation(elongation_m, x0_m, cfg);
  if (c.y0_m == 0.0) return c;
  const ArmSplit arms = split_arms(x0_m, cfg.rest_length_m);
  // The contact force balances the transverse components of the two wire legs,
  // each pulling with the full tension.
  c.force_n = cfg.tension_n * (c.y0_m / std::hypot(arms.near, c.y0_m) +
                               c.y0_m / std::hypot(arms.far, c.y0_m));
  return c;
}

CurvatureResult solve_curvature(double elongation_m, const WireConfig& cfg,
                                double rel_tol) {
  cfg.validate();
  if (!(elongation_m >= 0.0))
    throw std::domain_error("negative elongation; clamp slack readings upstream");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3))
    throw std::invalid_argument("rel_tol outside (0, 1e-3]");
  const double L = cfg.rest_length_m;
  if (elongation_m == 0.0) return {0.0, false};
  const double l_sat = cfg.saturation_elongation_m();
  if (elongation_m >= l_sat) return {2.0 / L, elongation_m > l_sat};

  const double s = L + elongation_m;
  // Positive while the candidate arc's chord still exceeds the rest span.
  const auto chord_excess = [&](double k) {
    return (2.0 / k) * std::sin(0.5 * k * s) - L;
  };

  double lo = 1e-9 / L;
  double hi = 2.0 / L;
  if (chord_excess(lo) <= 0.0) return {lo, false};
  // Second-order expansion of the chord equation seeds a tight bracket.
  const double seed = std::sqrt(24.0 * elongation_m / (s * s * s));
  const double seeded_lo = std::max(lo, 0.5 * seed);
  const double seeded_hi = std::min(hi, 2.0 * seed);
  if (seeded_lo < seeded_hi && chord_excess(seeded_lo) > 0.0 &&
      chord_excess(seeded_hi) < 0.0) {
    lo = seeded_lo;
    hi = seeded_hi;
  }
  // Run the bracket down to adjacent doubles. The chord equation is flat near
  // small curvatures, so stopping on the residual alone would leave the root
  // orders of magnitude less accurate than the bracket allows.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (chord_excess(mid) > 0.0 ? lo : hi) = mid;
  }
  const double kappa = 0.5 * (lo + hi);
  assert(std::abs(chord_excess(kappa)) <= rel_tol * L);
  return {kappa, false};
}

HomogeneousLoad homogeneous_load(double elongation_m, const WireConfig& cfg) {
  const CurvatureResult sol = solve_curvature(elongation_m, cfg);
  HomogeneousLoad h;
  h.curvature_per_m = sol.curvature_per_m;
  h.saturated = sol.saturated;
  h.central_angle_rad = sol.curvature_per_m * (cfg.rest_length_m + elongation_m);
  // min() keeps rounding from pushing the results past the model ceiling.
  h.load_n_per_m =
      std::min(cfg.tension_n * sol.curvature_per_m, cfg.max_load_n_per_m());
  h.total_force_n =
      std::min(h.load_n_per_m * cfg.rest_length_m, cfg.max_total_force_n());
  if (h.saturated) {
    h.load_n_per_m = cfg.max_load_n_per_m();
    h.total_force_n = cfg.max_total_force_n();
  }
  return h;
}

double elongation_from_point_force(double force_n, double x0_m, const WireConfig& cfg) {
  check_contact_inputs(0.0, x0_m, cfg);
  if (!(force_n >= 0.0)) throw std::domain_error("negative contact force");
  if (force_n >= cfg.max_total_force_n())
    throw SaturationError(
        "point force at or beyond twice the tension has no finite elongation");
  if (force_n == 0.0) return 0.0;
  double lo = 0.0;
  double hi = cfg.rest_length_m;
  while (point_force(hi, x0_m, cfg).force_n < force_n) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (point_force(mid, x0_m, cfg).force_n < force_n ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double elongation_from_load(double load_n_per_m, const WireConfig& cfg) {
  cfg.validate();
  if (!(load_n_per_m >= 0.0)) throw std::domain_error("negative distributed load");
  const double limit = cfg.max_load_n_per_m();
  if (load_n_per_m > limit)
    throw SaturationError(
        "distributed load beyond the semicircle limit has no finite elongation");
  if (load_n_per_m == 0.0) return 0.0;
  const double L = cfg.rest_length_m;
  if (load_n_per_m == limit) return cfg.saturation_elongation_m();
  const double u = 0.5 * (load_n_per_m / cfg.tension_n) * L; // half angle sine
  if (u < 1e-4) {
    // asin(u)/u - 1 cancels badly for tiny loads; use its expansion instead.
    const double u2 = u * u;
    return L * (u2 / 6.0 + 3.0 * u2 * u2 / 40.0);
  }
  return L * (std::asin(u) / u - 1.0);
}

ForceEstimate estimate_force(double elongation_m, ContactModel model,
                             const WireConfig& cfg, double x0_m) {
  ForceEstimate e;
  e.model = model;
  if (model == ContactModel::kPointMidspan) {
    const PointContact c = point_force(elongation_m, x0_m, cfg);
    e.total_force_n = c.force_n;
    e.saturated = c.force_n >= cfg.max_total_force_n() - 1e-9;
    e.detail = c;
  } else {
    const HomogeneousLoad h = homogeneous_load(elongation_m, cfg);
    e.total_force_n = h.total_force_n;
    e.saturated = h.saturated;
    e.detail = h;
  }
  return e;
}

ForceEstimate estimate_force(double elongation_m, ContactModel model,
                             const WireConfig& cfg) {
  return estimate_force(elongation_m, model, cfg, 0.5 * cfg.rest_length_m);
}

}  // namespace wiresense
