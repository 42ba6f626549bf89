#include "wiresense/energy_oracle.hpp"

#include "wiresense/force_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace wiresense {

namespace {

void validate_load(const LoadSpec& load, const WireConfig& cfg) {
  if (const auto* p = std::get_if<PointLoad>(&load)) {
    if (!(p->x0_m >= 0.0 && p->x0_m <= cfg.rest_length_m))
      throw std::domain_error("point load outside the wire span [0, L]");
    if (!(p->force_n >= 0.0 && p->force_n < cfg.max_total_force_n()))
      throw std::domain_error("point load force outside [0, 2T)");
  } else if (const auto* u = std::get_if<UniformLoad>(&load)) {
    if (!(u->load_n_per_m >= 0.0 && u->load_n_per_m <= cfg.max_load_n_per_m()))
      throw std::domain_error("distributed load outside [0, 2T/L]");
  }
}

// Deflection-only view of a uniformly spaced shape.
struct UniformGrid {
  int n = 0;       // segments
  double dx = 0.0; // node spacing
};

double polyline_length_of(const std::vector<double>& y, double dx) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const double dy = y[i + 1] - y[i];
    len += std::sqrt(dx * dx + dy * dy);
  }
  return len;
}

// Rescales the deflections by the factor that restores the target length.
// The length is monotone and convex in the scale, so a few Newton steps from
// the current shape suffice; max_newton_steps = 1 gives the cheap in-loop
// projection, larger values the full polish.
void project_length(std::vector<double>& y, double dx, double target,
                    int max_newton_steps) {
  double c = 1.0;
  for (int s = 0; s < max_newton_steps; ++s) {
    double f = -target;
    double fp = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
      const double dy0 = y[i + 1] - y[i];
      const double dy = c * dy0;
      const double seg = std::sqrt(dx * dx + dy * dy);
      f += seg;
      fp += dy * dy0 / seg;
    }
    if (std::abs(f) < 1e-13 * target) break;
    if (fp <= 0.0) break; // flat shape, length cannot move
    c -= f / fp;
    if (c < 0.0) c = 0.0;
  }
  for (double& v : y) v *= c;
}

double shape_energy(const std::vector<double>& y, const UniformGrid& g,
                    const LoadSpec& load, const WireConfig& cfg) {
  double e = cfg.tension_n * polyline_length_of(y, g.dx);
  if (const auto* u = std::get_if<UniformLoad>(&load)) {
    double trapz = 0.0;
    for (int i = 0; i < g.n; ++i) trapz += 0.5 * (y[i] + y[i + 1]) * g.dx;
    e -= u->load_n_per_m * trapz;
  } else if (const auto* p = std::get_if<PointLoad>(&load)) {
    const double pos = p->x0_m / g.dx;
    const int k = std::min(static_cast<int>(pos), g.n - 1);
    const double w = pos - k;
    e -= p->force_n * ((1.0 - w) * y[k] + w * y[k + 1]);
  }
  return e;
}

void shape_gradient(const std::vector<double>& y, const UniformGrid& g,
                    const LoadSpec& load, const WireConfig& cfg,
                    std::vector<double>& grad) {
  grad.assign(y.size(), 0.0);
  for (int i = 0; i < g.n; ++i) {
    const double dy = y[i + 1] - y[i];
    const double seg = std::sqrt(g.dx * g.dx + dy * dy);
    const double t = cfg.tension_n * dy / seg;
    grad[i] -= t;
    grad[i + 1] += t;
  }
  if (const auto* u = std::get_if<UniformLoad>(&load)) {
    for (int j = 1; j < g.n; ++j) grad[j] -= u->load_n_per_m * g.dx;
  } else if (const auto* p = std::get_if<PointLoad>(&load)) {
    const double pos = p->x0_m / g.dx;
    const int k = std::min(static_cast<int>(pos), g.n - 1);
    const double w = pos - k;
    grad[k] -= p->force_n * (1.0 - w);
    grad[k + 1] -= p->force_n * w;
  }
  grad.front() = 0.0; // pinned ends
  grad.back() = 0.0;
}

WireShape shape_from_deflections(const std::vector<double>& y, const UniformGrid& g,
                                 double rest_length) {
  WireShape s;
  s.nodes.resize(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double x = (j + 1 == y.size()) ? rest_length : g.dx * static_cast<double>(j);
    s.nodes[j] = {x, y[j]};
  }
  return s;
}

}  // namespace

double WireShape::polyline_length() const {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    len += std::hypot(nodes[i + 1].x - nodes[i].x, nodes[i + 1].y - nodes[i].y);
  return len;
}

EnergyBreakdown discrete_energy(const WireShape& shape, const LoadSpec& load,
                                const WireConfig& cfg) {
  cfg.validate();
  validate_load(load, cfg);
  const auto& nd = shape.nodes;
  if (nd.size() < 3)
    throw std::invalid_argument("wire shape needs at least two segments");
  const double L = cfg.rest_length_m;
  const double pin_tol = 1e-9 * L;
  if (std::abs(nd.front().x) > pin_tol || std::abs(nd.front().y) > pin_tol ||
      std::abs(nd.back().x - L) > pin_tol || std::abs(nd.back().y) > pin_tol)
    throw std::domain_error("wire shape endpoints must be pinned at (0,0) and (L,0)");
  for (std::size_t i = 0; i + 1 < nd.size(); ++i) {
    if (!(nd[i + 1].x > nd[i].x))
      throw std::domain_error("wire shape x must be strictly increasing");
  }

  EnergyBreakdown e;
  e.spring_j = cfg.tension_n * shape.polyline_length();
  if (const auto* u = std::get_if<UniformLoad>(&load)) {
    double trapz = 0.0;
    for (std::size_t i = 0; i + 1 < nd.size(); ++i)
      trapz += 0.5 * (nd[i].y + nd[i + 1].y) * (nd[i + 1].x - nd[i].x);
    e.vegetation_j = -u->load_n_per_m * trapz;
  } else if (const auto* p = std::get_if<PointLoad>(&load)) {
    // Deflection under the load point, linearly interpolated.
    std::size_t k = 0;
    while (k + 2 < nd.size() && nd[k + 1].x < p->x0_m) ++k;
    const double span = nd[k + 1].x - nd[k].x;
    const double w = std::clamp((p->x0_m - nd[k].x) / span, 0.0, 1.0);
    e.vegetation_j = -p->force_n * ((1.0 - w) * nd[k].y + w * nd[k + 1].y);
  }
  e.total_j = e.spring_j + e.vegetation_j;
  return e;
}

MinimizeReport minimize_energy_report(const LoadSpec& load, double elongation_m,
                                      int segment_count, const WireConfig& cfg,
                                      int max_iterations) {
  cfg.validate();
  validate_load(load, cfg);
  if (segment_count < 2)
    throw std::invalid_argument("segment_count must be at least 2");
  if (!(elongation_m >= 0.0))
    throw std::domain_error("negative elongation; clamp slack readings upstream");
  if (max_iterations < 1)
    throw std::invalid_argument("max_iterations must be at least 1");

  const double L = cfg.rest_length_m;
  const double T = cfg.tension_n;
  const UniformGrid g{segment_count, L / segment_count};
  const double target = L + elongation_m;
  const bool constrained = elongation_m > 0.0;

  MinimizeReport rep;
  std::vector<double> y(segment_count + 1, 0.0);
  if (constrained) {
    // A parabola dome scaled to the target length; any positive dome works.
    for (int j = 1; j < segment_count; ++j) {
      const double x = g.dx * j;
      y[j] = x * (L - x);
    }
    project_length(y, g.dx, target, 60);
  }

  double energy = shape_energy(y, g, load, cfg);
  rep.energy_trace.push_back(energy);

  if (constrained) {
    std::vector<double> grad;
    std::vector<double> candidate(y.size());
    double step = g.dx / (4.0 * T);
    const double stall_change = 1e-15 * T * L;
    int stalled = 0;
    int it = 0;
    while (it < max_iterations) {
      ++it;
      shape_gradient(y, g, load, cfg, grad);
      for (std::size_t j = 0; j < y.size(); ++j)
        candidate[j] = y[j] - step * grad[j];
      project_length(candidate, g.dx, target, 1);
      const double cand_energy = shape_energy(candidate, g, load, cfg);
      if (cand_energy <= energy) {
        const double drop = energy - cand_energy;
        y.swap(candidate);
        energy = cand_energy;
        rep.energy_trace.push_back(energy);
        step *= 1.1;
        stalled = (drop < stall_change) ? stalled + 1 : 0;
        if (stalled > 60) break;
      } else {
        step *= 0.5;
        if (step < 1e-18) break;
      }
    }
    rep.iterations = it;
    project_length(y, g.dx, target, 60);
    energy = shape_energy(y, g, load, cfg);

    // The gradient step can stall with a collapsed step size while a single
    // re-projected node move still descends. Sweep exactly that move class,
    // from coarse nudges down past the audit magnitude, until none is left.
    std::vector<double> polish(y.size());
    for (const double scale : {1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6, 3e-7,
                               1e-7, 3e-8, 1e-8}) {
      const double nudge = scale * L;
      bool improved = true;
      for (int sweep = 0; improved && sweep < 40; ++sweep) {
        improved = false;
        for (int j = 1; j < segment_count; ++j) {
          for (const double sign : {1.0, -1.0}) {
            polish = y;
            polish[j] += sign * nudge;
            project_length(polish, g.dx, target, 50);
            const double polished = shape_energy(polish, g, load, cfg);
            if (polished < energy - 1e-16 * T * L) {
              y.swap(polish);
              energy = polished;
              rep.energy_trace.push_back(energy);
              improved = true;
            }
          }
        }
      }
    }
  }

  rep.final_energy_j = energy;
  rep.length_residual_m = std::abs(polyline_length_of(y, g.dx) - target);

  // Local-minimum audit: no re-projected single-node nudge may do better.
  const double nudge = 1e-4 * L;
  double worst = 0.0;
  std::vector<double> probe;
  for (int j = 1; j < segment_count; ++j) {
    for (const double sign : {1.0, -1.0}) {
      probe = y;
      probe[j] += sign * nudge;
      project_length(probe, g.dx, target, 50);
      worst = std::min(worst, shape_energy(probe, g, load, cfg) - energy);
    }
  }
  rep.worst_perturbation_gain_j = worst;

  rep.shape = shape_from_deflections(y, g, L);
  return rep;
}

WireShape minimize_energy(const LoadSpec& load, double elongation_m,
                          int segment_count, const WireConfig& cfg,
                          int max_iterations) {
  MinimizeReport rep =
      minimize_energy_report(load, elongation_m, segment_count, cfg, max_iterations);
  const double L = cfg.rest_length_m;
  const double gain_floor = -1e-9 * cfg.tension_n * L;
  if (rep.length_residual_m > 1e-6 * L ||
      rep.worst_perturbation_gain_j < gain_floor) {
    std::ostringstream msg;
    msg << "energy minimization did not converge after " << rep.iterations
        << " iterations: length residual " << rep.length_residual_m
        << " m, best perturbation gain " << -rep.worst_perturbation_gain_j
        << " J";
    throw MinimizeFailure(msg.str());
  }
  return rep.shape;
}

double stationarity_residual(double elongation_m, double x0_m, const WireConfig& cfg,
                             double step_m, double force_scale) {
  if (!(step_m > 0.0)) throw std::invalid_argument("step_m must be positive");
  const PointContact contact = point_force(elongation_m, x0_m, cfg);
  const double L = cfg.rest_length_m;
  const double T = cfg.tension_n;
  const double force = contact.force_n * force_scale;
  // Energy along the triangular family with the apex pinned above x0.
  const auto energy_at = [&](double y) {
    return T * (std::hypot(x0_m, y) + std::hypot(L - x0_m, y)) - force * y;
  };
  if (contact.y0_m <= 0.0) {
    const double slope = (energy_at(step_m) - energy_at(0.0)) / step_m;
    return std::max(0.0, -slope) / T;
  }
  const double h = std::min(step_m, 0.5 * contact.y0_m);
  return std::abs(energy_at(contact.y0_m + h) - energy_at(contact.y0_m - h)) /
         (2.0 * h) / T;
}

double perturbation_sweep_min_gain(const WireShape& shape, const LoadSpec& load,
                                   const WireConfig& cfg, int count,
                                   double magnitude_m, unsigned seed) {
  if (count < 1) throw std::invalid_argument("count must be at least 1");
  if (!(magnitude_m > 0.0))
    throw std::invalid_argument("magnitude_m must be positive");
  const double base = discrete_energy(shape, load, cfg).total_j;
  const double target = shape.polyline_length();

  // Work on deflections only; x stays fixed, so rescaling y preserves the
  // graph property while restoring the length.
  const std::size_t n = shape.nodes.size();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-magnitude_m, magnitude_m);
  double worst = std::numeric_limits<double>::infinity();
  std::vector<Point2> probe(n);
  for (int c = 0; c < count; ++c) {
    probe = shape.nodes;
    for (std::size_t j = 1; j + 1 < n; ++j) probe[j].y += jitter(rng);
    // Scalar Newton on the deflection scale, reusing the polyline length.
    double scale = 1.0;
    for (int s = 0; s < 50; ++s) {
      double f = -target;
      double fp = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dx = probe[i + 1].x - probe[i].x;
        const double dy0 = probe[i + 1].y - probe[i].y;
        const double dy = scale * dy0;
        const double seg = std::sqrt(dx * dx + dy * dy);
        f += seg;
        fp += dy * dy0 / seg;
      }
      if (std::abs(f) < 1e-13 * target) break;
      if (fp <= 0.0) break;
      scale -= f / fp;
      if (scale < 0.0) scale = 0.0;
    }
    WireShape candidate;
    candidate.nodes = probe;
    for (auto& nd : candidate.nodes) nd.y *= scale;
    worst = std::min(worst, discrete_energy(candidate, load, cfg).total_j - base);
  }
  return worst;
}

}  // namespace wiresense
