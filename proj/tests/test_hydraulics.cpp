// Pipe hydraulics: friction factor solve, losses, regime bands, gravity flow.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "acwa/fluid.hpp"
#include "acwa/hydraulics.hpp"

using Catch::Approx;

TEST_CASE("area, velocity and Reynolds number basics") {
  CHECK(acwa::pipe_area(0.1) == Approx(0.007853981633974483).epsilon(1e-15));
  CHECK(acwa::flow_velocity(0.0035, 0.1) ==
        Approx(0.4456338406573069).epsilon(1e-14));
  const double nu26 = acwa::kinematic_viscosity(26.0);
  CHECK(acwa::reynolds(0.4456338406573069, 0.1, nu26) ==
        Approx(50725.93353597).epsilon(1e-9));
  CHECK_THROWS_AS(acwa::pipe_area(0.0), acwa::DomainError);
  CHECK_THROWS_AS(acwa::reynolds(1.0, 0.1, 0.0), acwa::DomainError);
}

TEST_CASE("regime bands have the documented boundaries") {
  using acwa::FlowRegime;
  CHECK(acwa::classify_regime(0.0) == FlowRegime::Still);
  CHECK(acwa::classify_regime(1.0) == FlowRegime::Laminar);
  CHECK(acwa::classify_regime(2299.999) == FlowRegime::Laminar);
  CHECK(acwa::classify_regime(2300.0) == FlowRegime::Transitional);
  CHECK(acwa::classify_regime(4000.0) == FlowRegime::Transitional);
  CHECK(acwa::classify_regime(4000.001) == FlowRegime::Turbulent);
  CHECK(acwa::classify_regime(1e8) == FlowRegime::Turbulent);
}

TEST_CASE("laminar branch is the exact closed form") {
  for (double re : {1.0, 64.0, 500.0, 2299.0}) {
    CHECK(acwa::friction_factor(re, 0.0) == 64.0 / re);
    CHECK(acwa::friction_factor(re, 0.01) == 64.0 / re);
  }
}

TEST_CASE("turbulent friction factors match frozen anchors") {
  // Frozen from an independent bisection of the implicit relation.
  CHECK(acwa::friction_factor(1e5, 0.0) ==
        Approx(0.0179897730842738).epsilon(1e-10));
  CHECK(acwa::friction_factor(50727.0, 2e-4) ==
        Approx(0.0215290180392318).epsilon(1e-10));
}

TEST_CASE("solver reports a tiny self-consistency residual") {
  for (double re : {4000.0, 2e4, 1e5, 1e6, 1e8}) {
    for (double rr : {0.0, 1e-5, 1e-3, 0.05}) {
      const acwa::FrictionSolve s = acwa::friction_factor_solve(re, rr);
      CHECK(s.residual < 1e-9);
      CHECK(s.iterations <= 40);
      CHECK(s.f > 0.0);
    }
  }
}

// Independent oracle: bisection on x = 1/sqrt(f). g(x) = x + 2 log10(wall +
// (2.51/Re) x) is strictly increasing, so the root is unique.
static double bisect_friction(double re, double rr) {
  const double wall = rr / 3.71;
  const auto g = [&](double x) {
    return x + 2.0 * std::log10(wall + 2.51 * x / re);
  };
  double lo = 1.0, hi = 100.0;  // f in [1e-4, 1]
  REQUIRE(g(lo) < 0.0);
  REQUIRE(g(hi) > 0.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  const double x = 0.5 * (lo + hi);
  return 1.0 / (x * x);
}

TEST_CASE("fixed point agrees with a bisection oracle across the chart") {
  // 20 x 20 log-spaced grid over the whole turbulent domain.
  for (int i = 0; i < 20; ++i) {
    const double re = 4e3 * std::pow(1e8 / 4e3, i / 19.0);
    for (int j = 0; j < 20; ++j) {
      const double rr = 1e-6 * std::pow(5e-2 / 1e-6, j / 19.0);
      const double ours = acwa::friction_factor(re, rr);
      const double ref = bisect_friction(re, rr);
      CHECK(std::fabs(ours - ref) / ref < 1e-9);
    }
  }
}

TEST_CASE("explicit approximation stays within its published corridor") {
  // Swamee-Jain is accurate to a few percent against the implicit relation;
  // observed worst case on this grid is ~3.4%.
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double re = 5e3 * std::pow(1e8 / 5e3, i / 19.0);
    for (int j = 0; j < 20; ++j) {
      const double rr = 1e-6 * std::pow(5e-2 / 1e-6, j / 19.0);
      const double approx = acwa::swamee_jain(re, rr);
      const double exact = acwa::friction_factor(re, rr);
      worst = std::fmax(worst, std::fabs(approx - exact) / exact);
    }
  }
  CHECK(worst < 0.035);
}

TEST_CASE("friction factor domain errors") {
  CHECK_THROWS_AS(acwa::friction_factor(0.0, 0.0), acwa::DomainError);
  CHECK_THROWS_AS(acwa::friction_factor(-5.0, 0.0), acwa::DomainError);
  CHECK_THROWS_AS(acwa::friction_factor(1e5, -1e-9), acwa::DomainError);
  CHECK_THROWS_AS(acwa::friction_factor(1e5, 0.051), acwa::DomainError);
}

TEST_CASE("head losses match hand-computed anchors") {
  CHECK(acwa::pipe_head_loss(0.02, 30.0, 0.1, 1.0) ==
        Approx(0.3059148638934).epsilon(1e-10));
  const double v = 0.4456338406573069;
  const double f = 0.021529107660896125;
  CHECK(acwa::pipe_head_loss(f, 3.0, 0.1, v) ==
        Approx(0.006539626409261096).epsilon(1e-9));
  CHECK(acwa::minor_loss(1.5, v) == Approx(0.015187871491).epsilon(1e-9));
}

TEST_CASE("bed pressure is rho g h") {
  CHECK(acwa::elevation_pressure(996.67313246134, 0.2) ==
        Approx(1954.8049148903997).epsilon(1e-9));
  CHECK(acwa::elevation_pressure(998.2071, 1.0) ==
        Approx(9789.067657214999).epsilon(1e-9));
  CHECK(acwa::pascal_to_psi(1954.8049148903997) == Approx(0.28352).margin(5e-6));
  CHECK(acwa::elevation_pressure(1000.0, 0.0) == 0.0);
}

TEST_CASE("flow state bundles the commanded hydraulics") {
  const acwa::FlowState s =
      acwa::flow_state_for(0.0035, 0.1, acwa::kinematic_viscosity(26.0), 2e-4);
  CHECK(s.flow == 0.0035);
  CHECK(s.velocity == Approx(0.4456338406573069).epsilon(1e-14));
  CHECK(s.reynolds == Approx(50725.93353597).epsilon(1e-9));
  CHECK(s.regime == acwa::FlowRegime::Turbulent);
  CHECK(s.friction == Approx(0.021529107660896125).epsilon(1e-9));
  const acwa::FlowState still = acwa::flow_state_for(0.0, 0.1, 1e-6, 0.0);
  CHECK(still.regime == acwa::FlowRegime::Still);
  CHECK(still.velocity == 0.0);
}

TEST_CASE("gravity solve reproduces the constant-friction closed form") {
  // With f pinned the energy balance is algebraic:
  // v = sqrt(2 g H / (f L/D + K)).
  const double expected = std::sqrt(2.0 * acwa::GRAVITY * 0.1 /
                                    (0.02 * (3.0 / 0.1) + 1.5));
  const acwa::GravitySolve g = acwa::gravity_velocity_with(
      0.1, 3.0, 0.1, 1.5, [](double) { return 0.02; });
  CHECK(g.state.velocity == Approx(expected).epsilon(1e-12));
  CHECK(g.state.velocity == Approx(0.96641950863311255).epsilon(1e-11));
  CHECK(std::fabs(g.residual) < 1e-12);
}

TEST_CASE("gravity solve with live friction balances energy") {
  const acwa::GravitySolve g =
      acwa::gravity_velocity(0.1, 3.0, 0.1, 1.5, 1e-6, 2e-4);
  CHECK(g.state.velocity == Approx(0.972747580668866).epsilon(1e-9));
  CHECK(std::fabs(g.residual) < 1e-8);
  CHECK(g.state.regime == acwa::FlowRegime::Turbulent);
  CHECK(g.state.flow ==
        Approx(g.state.velocity * acwa::pipe_area(0.1)).epsilon(1e-15));
}

TEST_CASE("gravity solve balances energy across random configurations") {
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double head = 0.01 + 1.99 * u01(rng);
    const double length = 0.5 + 29.5 * u01(rng);
    const double diameter = 0.01 + 0.29 * u01(rng);
    const double k = 5.0 * u01(rng);
    const double nu = 3e-7 + 1.5e-6 * u01(rng);
    const double rr = 0.05 * u01(rng);
    const acwa::GravitySolve g =
        acwa::gravity_velocity(head, length, diameter, k, nu, rr);
    INFO("head=" << head << " L=" << length << " D=" << diameter
                 << " K=" << k << " nu=" << nu << " rr=" << rr);
    CHECK(g.state.velocity > 0.0);
    CHECK(std::fabs(g.residual) < 1e-8);
    // Energy balance recomputed from scratch.
    const double lhs = head;
    const double rhs = (g.state.friction * length / diameter + k) *
                       g.state.velocity * g.state.velocity /
                       (2.0 * acwa::GRAVITY);
    CHECK(lhs == Approx(rhs).epsilon(1e-7));
  }
}

TEST_CASE("zero or negative head yields still water") {
  for (double head : {0.0, -0.5}) {
    const acwa::GravitySolve g =
        acwa::gravity_velocity(head, 3.0, 0.1, 1.5, 1e-6, 0.0);
    CHECK(g.state.velocity == 0.0);
    CHECK(g.state.flow == 0.0);
    CHECK(g.state.regime == acwa::FlowRegime::Still);
  }
}

TEST_CASE("gravity solve domain errors") {
  CHECK_THROWS_AS(acwa::gravity_velocity(0.1, 0.0, 0.1, 1.0, 1e-6, 0.0),
                  acwa::DomainError);
  CHECK_THROWS_AS(acwa::gravity_velocity(0.1, 3.0, 0.0, 1.0, 1e-6, 0.0),
                  acwa::DomainError);
  CHECK_THROWS_AS(acwa::gravity_velocity(0.1, 3.0, 0.1, -1.0, 1e-6, 0.0),
                  acwa::DomainError);
}
