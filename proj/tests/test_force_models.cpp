#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wiresense/force_models.hpp"

using namespace wiresense;

namespace {

const WireConfig kWire{};

// Independent check: the apex height is the root of the length constraint
// |leg1| + |leg2| = L + l, found here by bisection rather than algebra.
double oracle_y0_bisect(double l, double x0, const WireConfig& cfg) {
  const double L = cfg.rest_length_m;
  const double target = L + l;
  const auto deformed_length = [&](double y) {
    return std::hypot(x0, y) + std::hypot(L - x0, y);
  };
  double lo = 0.0;
  double hi = target;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (deformed_length(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Independent check: elongation of the arc with curvature kappa whose chord
// is the rest span, from the arc-length formula rather than the chord solve.
double oracle_elongation_from_kappa(double kappa, const WireConfig& cfg) {
  const double L = cfg.rest_length_m;
  return (2.0 / kappa) * std::asin(0.5 * kappa * L) - L;
}

}  // namespace

TEST_CASE("apex height from elongation") {
  SUBCASE("zero elongation means no deflection") {
    CHECK(y0_from_elongation(0.0, 0.22, kWire) == 0.0);
    CHECK(y0_from_elongation(0.0, 0.0, kWire) == 0.0);
  }

  SUBCASE("reference value at midspan") {
    CHECK(y0_from_elongation(0.1, 0.22, kWire) ==
          doctest::Approx(0.15652475842498528).epsilon(1e-13));
  }

  SUBCASE("matches the length-constraint bisection") {
    const double L = kWire.rest_length_m;
    for (const auto& [l, x0] : {std::pair{0.01, 0.1 * L},
                                std::pair{0.05, 0.132},
                                std::pair{0.2, 0.4},
                                std::pair{0.003, 0.02}}) {
      CHECK(y0_from_elongation(l, x0, kWire) ==
            doctest::Approx(oracle_y0_bisect(l, x0, kWire)).epsilon(1e-11));
    }
  }

  SUBCASE("apex satisfies the length constraint everywhere") {
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> draw_l(0.0, 3.0 * kWire.rest_length_m);
    std::uniform_real_distribution<double> draw_x0(0.0, kWire.rest_length_m);
    for (int i = 0; i < 10000; ++i) {
      const double l = draw_l(rng);
      const double x0 = draw_x0(rng);
      const double y0 = y0_from_elongation(l, x0, kWire);
      const double len = std::hypot(x0, y0) + std::hypot(kWire.rest_length_m - x0, y0);
      CHECK(std::abs(len - (kWire.rest_length_m + l)) < 1e-9 * kWire.rest_length_m);
    }
  }

  SUBCASE("rejects out-of-range inputs") {
    CHECK_THROWS_AS(y0_from_elongation(0.1, -0.01, kWire), std::domain_error);
    CHECK_THROWS_AS(y0_from_elongation(0.1, kWire.rest_length_m + 0.01, kWire),
                    std::domain_error);
    CHECK_THROWS_AS(y0_from_elongation(-0.1, 0.2, kWire), std::domain_error);
    WireConfig bad = kWire;
    bad.tension_n = 0.0;
    CHECK_THROWS_AS(y0_from_elongation(0.1, 0.2, bad), std::invalid_argument);
  }
}

TEST_CASE("point contact force") {
  SUBCASE("zero elongation gives zero force") {
    CHECK(point_force(0.0, 0.22, kWire).force_n == 0.0);
  }

  SUBCASE("reference value at midspan") {
    const PointContact c = point_force(0.1, 0.22, kWire);
    CHECK(c.force_n == doctest::Approx(2.5507738409997605).epsilon(1e-13));
    CHECK(c.x0_m == 0.22);
  }

  SUBCASE("approaches twice the tension for extreme deflection") {
    const double force = point_force(1000.0 * kWire.rest_length_m, 0.22, kWire).force_n;
    CHECK(force == doctest::Approx(4.399997804392862).epsilon(1e-12));
    CHECK(force < 2.0 * kWire.tension_n);
    CHECK(std::abs(force - 4.4) < 0.01 * 4.4);
  }

  SUBCASE("mirrored contacts give bitwise-equal results") {
    const double L = kWire.rest_length_m;
    std::mt19937 rng(441122);
    std::uniform_real_distribution<double> draw_frac(0.0, 0.5);
    std::uniform_real_distribution<double> draw_l(1e-6, 2.0 * L);
    int tested = 0;
    for (int attempt = 0; attempt < 100000 && tested < 1000; ++attempt) {
      const double x0 = draw_frac(rng) * L;
      const double mirrored = L - x0;
      if (L - mirrored != x0) continue; // keep exact conjugate pairs
      const double l = draw_l(rng);
      const PointContact a = point_force(l, x0, kWire);
      const PointContact b = point_force(l, mirrored, kWire);
      CHECK(a.y0_m == b.y0_m);
      CHECK(a.force_n == b.force_n);
      ++tested;
    }
    CHECK(tested == 1000);
  }

  SUBCASE("strictly increasing in elongation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> draw_l(0.0, 20.0 * kWire.rest_length_m);
    std::uniform_real_distribution<double> draw_x0(0.01, kWire.rest_length_m - 0.01);
    for (int i = 0; i < 10000; ++i) {
      double l1 = draw_l(rng);
      double l2 = draw_l(rng);
      if (std::abs(l1 - l2) < 1e-6) continue;
      if (l1 > l2) std::swap(l1, l2);
      const double x0 = draw_x0(rng);
      CHECK(point_force(l1, x0, kWire).force_n < point_force(l2, x0, kWire).force_n);
    }
  }

  SUBCASE("bounded by [0, 2T)") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> draw_l(0.0, 20.0 * kWire.rest_length_m);
    std::uniform_real_distribution<double> draw_x0(0.0, kWire.rest_length_m);
    const double cap = 2.0 * kWire.tension_n;
    for (int i = 0; i < 10000; ++i) {
      const double f = point_force(draw_l(rng), draw_x0(rng), kWire).force_n;
      CHECK(f >= 0.0);
      CHECK(f < cap);
    }
  }
}

TEST_CASE("curvature from elongation") {
  const double L = kWire.rest_length_m;

  SUBCASE("zero elongation means a straight wire") {
    const CurvatureResult r = solve_curvature(0.0, kWire);
    CHECK(r.curvature_per_m == 0.0);
    CHECK_FALSE(r.saturated);
  }

  SUBCASE("reference values") {
    CHECK(solve_curvature(0.01, kWire).curvature_per_m ==
          doctest::Approx(1.628337710928244).epsilon(1e-12));
    CHECK(solve_curvature(0.05, kWire).curvature_per_m ==
          doctest::Approx(3.244609960103097).epsilon(1e-12));
    CHECK(solve_curvature(0.1, kWire).curvature_per_m ==
          doctest::Approx(4.020957992718603).epsilon(1e-12));
    CHECK(solve_curvature(0.2, kWire).curvature_per_m ==
          doctest::Approx(4.508161843355172).epsilon(1e-12));
  }

  SUBCASE("verified by forward arc geometry") {
    for (const double l : {0.01, 0.05, 0.1, 0.2}) {
      const double kappa = solve_curvature(l, kWire).curvature_per_m;
      CHECK(oracle_elongation_from_kappa(kappa, kWire) ==
            doctest::Approx(l).epsilon(1e-10));
    }
  }

  SUBCASE("semicircle boundary and saturation") {
    const double l_sat = kWire.saturation_elongation_m();
    const CurvatureResult at_limit = solve_curvature(l_sat, kWire);
    CHECK(at_limit.curvature_per_m == 2.0 / L);
    CHECK_FALSE(at_limit.saturated);
    const CurvatureResult beyond = solve_curvature(1.5 * l_sat, kWire);
    CHECK(beyond.curvature_per_m == 2.0 / L);
    CHECK(beyond.saturated);
  }

  SUBCASE("chord residual stays inside tolerance") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> draw_l(1e-8, kWire.saturation_elongation_m());
    for (int i = 0; i < 10000; ++i) {
      const double l = draw_l(rng);
      const double kappa = solve_curvature(l, kWire).curvature_per_m;
      const double chord = (2.0 / kappa) * std::sin(0.5 * kappa * (L + l));
      CHECK(std::abs(chord - L) < 1e-9 * L);
    }
  }

  SUBCASE("small elongations follow the series expansion") {
    for (const double l : {1e-5 * L, 1e-6 * L, 1e-7 * L}) {
      const double kappa = solve_curvature(l, kWire).curvature_per_m;
      const double series = std::sqrt(24.0 * l / std::pow(L + l, 3));
      CHECK(std::abs(kappa - series) < 0.01 * series);
    }
  }

  SUBCASE("rejects bad inputs") {
    CHECK_THROWS_AS(solve_curvature(-0.01, kWire), std::domain_error);
    CHECK_THROWS_AS(solve_curvature(0.1, kWire, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_curvature(0.1, kWire, 1e-2), std::invalid_argument);
  }
}

TEST_CASE("homogeneous load from elongation") {
  const double L = kWire.rest_length_m;

  SUBCASE("reference values") {
    const HomogeneousLoad h = homogeneous_load(0.1, kWire);
    CHECK(h.load_n_per_m == doctest::Approx(8.846107583980928).epsilon(1e-12));
    CHECK(h.total_force_n == doctest::Approx(3.892287336951608).epsilon(1e-12));
    CHECK(h.central_angle_rad ==
          doctest::Approx(2.1713173160680457).epsilon(1e-12));
    CHECK_FALSE(h.saturated);
  }

  SUBCASE("zero elongation gives zero load") {
    const HomogeneousLoad h = homogeneous_load(0.0, kWire);
    CHECK(h.load_n_per_m == 0.0);
    CHECK(h.total_force_n == 0.0);
    CHECK_FALSE(h.saturated);
  }

  SUBCASE("saturated wire reports the exact ceiling") {
    const HomogeneousLoad h = homogeneous_load(2.0 * L, kWire);
    CHECK(h.saturated);
    CHECK(h.total_force_n == 2.0 * kWire.tension_n);
    CHECK(h.load_n_per_m == kWire.max_load_n_per_m());
    CHECK(h.curvature_per_m == 2.0 / L);
  }

  SUBCASE("semicircle itself is the last unsaturated shape") {
    const HomogeneousLoad h = homogeneous_load(kWire.saturation_elongation_m(), kWire);
    CHECK_FALSE(h.saturated);
    CHECK(h.total_force_n == 2.0 * kWire.tension_n);
  }

  SUBCASE("total force never exceeds the ceiling") {
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> draw_l(0.0, 3.0 * L);
    const double cap = 2.0 * kWire.tension_n;
    for (int i = 0; i < 10000; ++i) {
      const HomogeneousLoad h = homogeneous_load(draw_l(rng), kWire);
      CHECK(h.total_force_n >= 0.0);
      CHECK(h.total_force_n <= cap);
      CHECK(h.curvature_per_m <= 2.0 / L);
    }
  }
}

TEST_CASE("elongation from point force") {
  SUBCASE("round trips against the forward model") {
    for (const double l : {0.01, 0.1, 0.3}) {
      const double f = point_force(l, 0.22, kWire).force_n;
      CHECK(std::abs(elongation_from_point_force(f, 0.22, kWire) - l) <
            1e-6 * kWire.rest_length_m);
    }
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> draw_l(1e-6, 2.0 * kWire.rest_length_m);
    std::uniform_real_distribution<double> draw_x0(0.02, kWire.rest_length_m - 0.02);
    for (int i = 0; i < 200; ++i) {
      const double l = draw_l(rng);
      const double x0 = draw_x0(rng);
      const double f = point_force(l, x0, kWire).force_n;
      CHECK(std::abs(elongation_from_point_force(f, x0, kWire) - l) <
            1e-6 * kWire.rest_length_m);
    }
  }

  SUBCASE("reference value") {
    CHECK(elongation_from_point_force(2.5507738409997605, 0.22, kWire) ==
          doctest::Approx(0.1).epsilon(1e-9));
  }

  SUBCASE("zero force means zero elongation") {
    CHECK(elongation_from_point_force(0.0, 0.22, kWire) == 0.0);
  }

  SUBCASE("saturation and domain errors") {
    const double cap = 2.0 * kWire.tension_n;
    CHECK_THROWS_AS(elongation_from_point_force(cap, 0.22, kWire), SaturationError);
    CHECK_THROWS_AS(elongation_from_point_force(1.1 * cap, 0.22, kWire),
                    SaturationError);
    CHECK_THROWS_AS(elongation_from_point_force(-1.0, 0.22, kWire),
                    std::domain_error);
  }
}

TEST_CASE("elongation from distributed load") {
  const double L = kWire.rest_length_m;

  SUBCASE("the limit load bends the wire into a semicircle") {
    CHECK(elongation_from_load(10.0, kWire) ==
          doctest::Approx(kWire.saturation_elongation_m()).epsilon(1e-6));
  }

  SUBCASE("round trips against the forward model") {
    CHECK(elongation_from_load(8.846107583980928, kWire) ==
          doctest::Approx(0.1).epsilon(1e-9));
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> draw_l(1e-6, 0.99 * kWire.saturation_elongation_m());
    for (int i = 0; i < 500; ++i) {
      const double l = draw_l(rng);
      const double load = homogeneous_load(l, kWire).load_n_per_m;
      CHECK(std::abs(elongation_from_load(load, kWire) - l) < 1e-6 * L);
    }
  }

  SUBCASE("tiny loads use the series branch consistently") {
    // Either side of the series cutoff must agree with the arc geometry.
    for (const double load : {1e-4, 1e-3, 0.5, 1.0}) {
      const double l = elongation_from_load(load, kWire);
      const double kappa = load / kWire.tension_n;
      CHECK(l == doctest::Approx(oracle_elongation_from_kappa(kappa, kWire))
                     .epsilon(1e-6));
    }
  }

  SUBCASE("zero load means zero elongation") {
    CHECK(elongation_from_load(0.0, kWire) == 0.0);
  }

  SUBCASE("saturation and domain errors") {
    CHECK_THROWS_AS(elongation_from_load(1.01 * kWire.max_load_n_per_m(), kWire),
                    SaturationError);
    CHECK_THROWS_AS(elongation_from_load(-1.0, kWire), std::domain_error);
  }
}

TEST_CASE("combined estimator") {
  SUBCASE("dispatches to the requested model") {
    const ForceEstimate p = estimate_force(0.1, ContactModel::kPointMidspan, kWire);
    CHECK(p.total_force_n == doctest::Approx(2.5507738409997605).epsilon(1e-13));
    CHECK(std::holds_alternative<PointContact>(p.detail));
    CHECK_FALSE(p.saturated);

    const ForceEstimate h = estimate_force(0.1, ContactModel::kHomogeneous, kWire);
    CHECK(h.total_force_n == doctest::Approx(3.892287336951608).epsilon(1e-13));
    CHECK(std::holds_alternative<HomogeneousLoad>(h.detail));
    CHECK_FALSE(h.saturated);
  }

  SUBCASE("homogeneous saturation carries through") {
    const ForceEstimate h =
        estimate_force(2.0 * kWire.rest_length_m, ContactModel::kHomogeneous, kWire);
    CHECK(h.saturated);
    CHECK(h.total_force_n == 2.0 * kWire.tension_n);
  }

  SUBCASE("explicit contact position is honored") {
    const ForceEstimate p =
        estimate_force(0.1, ContactModel::kPointMidspan, kWire, 0.1);
    const PointContact& c = std::get<PointContact>(p.detail);
    CHECK(c.x0_m == 0.1);
    CHECK(p.total_force_n == point_force(0.1, 0.1, kWire).force_n);
  }
}
