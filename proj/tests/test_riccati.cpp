#include "supjump/riccati.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace supjump;

namespace {

// Nondimensional benchmark: b = 1, M1 = 1/2, stationary mean = 1.
ModelParams unit_ag(double alpha, double w) {
  const double m1 = 0.5;
  const double beta = 1.0 / ((1.0 - m1) * (alpha - 1.0));
  return ModelParams::make(ModelKind::AG, 1.0, w, JumpMeasure(0.5, 1.0),
                           ReversionMixture::gamma(alpha, beta));
}

ModelParams ag_on_nodes(double w) {
  return ModelParams::make(ModelKind::AG, 1.0, w, JumpMeasure(0.5, 1.0),
                           ReversionMixture::discrete({0.5, 1.0, 2.0},
                                                      {0.3, 0.4, 0.3}));
}

}  // namespace

TEST_CASE("riccati: theta = 0 is a fixed point") {
  const auto p = ag_on_nodes(0.5);
  const RGrid grid = p.mixture.discretize(3);
  const auto sol = solve_riccati(p, grid, 0.0);
  CHECK(sol.exponent == 0.0);
  CHECK(mgf(sol) == 1.0);
  CHECK_FALSE(sol.truncated);
}

TEST_CASE("riccati: w = 1 nodes decouple and match a scalar ODE solve") {
  const auto p = ag_on_nodes(1.0);
  const RGrid grid = p.mixture.discretize(3);
  SolverConfig cfg;
  cfg.dt = 1e-5;
  cfg.t_max = 20.0;
  cfg.max_snapshots = 2000;
  const double theta = 1.0;
  const auto sol = solve_riccati(p, grid, theta, cfg);

  for (std::size_t node = 0; node < grid.size(); ++node) {
    const double r = grid.nodes[node];
    oracle::ScalarOde exact(
        [&](double, double b) {
          return r * (-b + p.jump.excitation_transform(b));
        },
        theta, sol.trajectory.times);
    double sup = 0.0;
    for (std::size_t k = 0; k < sol.trajectory.times.size(); ++k) {
      sup = std::max(sup, std::abs(sol.trajectory.states[k][node] -
                                   exact.values()[k]));
    }
    CHECK(sup < 1e-6);
  }
}

TEST_CASE("riccati: linearization regime at tiny theta") {
  const auto p = ag_on_nodes(1.0);
  const RGrid grid = p.mixture.discretize(3);
  SolverConfig cfg;
  cfg.dt = 1e-5;
  cfg.t_max = 12.0;
  cfg.max_snapshots = 1000;
  const double theta = 1e-6;
  const auto sol = solve_riccati(p, grid, theta, cfg);
  const double m1 = p.m1();
  for (std::size_t k = 0; k < sol.trajectory.times.size(); ++k) {
    const double t = sol.trajectory.times[k];
    for (std::size_t node = 0; node < grid.size(); ++node) {
      const double exact = theta * std::exp(-(1.0 - m1) * grid.nodes[node] * t);
      if (exact < 1e-3 * theta) continue;  // relative comparison region
      CHECK(sol.trajectory.states[k][node] ==
            doctest::Approx(exact).epsilon(1e-3));
    }
  }
}

TEST_CASE("riccati: bounds, decay diagnostic, snapshot bookkeeping") {
  const auto p = unit_ag(4.0, 0.3);
  const RGrid grid = p.mixture.discretize(64);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  const double theta = 2.0;
  const auto sol = solve_riccati(p, grid, theta, cfg);
  const double upper = theta / (1.0 - p.m1()) + 1e-9;
  for (const auto& state : sol.trajectory.states) {
    for (double v : state) {
      CHECK(v >= -1e-12);
      CHECK(v <= upper);
    }
  }
  WARN_MESSAGE(sol.max_decay_monotone, "max B rebounded after its peak");
  CHECK(sol.trajectory.times.size() >= 2);
  CHECK(sol.trajectory.times.front() == 0.0);
  CHECK(sol.trajectory.times.back() == doctest::Approx(sol.horizon));
  CHECK(sol.tail_bound >= 0.0);
  CHECK(sol.tail_bound < 1e-8);  // fully decayed run
}

TEST_CASE("riccati: mgf is decreasing in theta and below one") {
  const auto p = unit_ag(4.0, 0.5);
  const RGrid grid = p.mixture.discretize(64);
  double prev = 1.0;
  for (double theta : {0.1, 1.0, 10.0}) {
    const auto sol = solve_riccati(p, grid, theta);
    const double m = mgf(sol);
    CHECK(m > 0.0);
    CHECK(m < prev);
    prev = m;
  }
}

TEST_CASE("riccati: truncation warning carries a tail estimate") {
  const auto p = ag_on_nodes(1.0);
  const RGrid grid = p.mixture.discretize(3);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_max = 0.5;  // far too short on purpose
  const auto sol = solve_riccati(p, grid, 1.0, cfg);
  CHECK(sol.truncated);
  CHECK(sol.tail_bound > 0.0);
}

TEST_CASE("lyapunov: initial conditions and the w = 1 exponential solution") {
  const auto p = ag_on_nodes(1.0);
  const RGrid grid = p.mixture.discretize(3);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.max_snapshots = 1000;
  const auto sol = solve_lyapunov(p, grid, 1, cfg);

  for (double v : sol.trajectory.states.front()) CHECK(v == 1.0);

  const double m1 = p.m1();
  double sup = 0.0;
  for (std::size_t k = 0; k < sol.trajectory.times.size(); ++k) {
    const double t = sol.trajectory.times[k];
    for (std::size_t node = 0; node < grid.size(); ++node) {
      const double exact = std::exp(-(1.0 - m1) * grid.nodes[node] * t);
      sup = std::max(sup, std::abs(sol.trajectory.states[k][node] - exact));
    }
  }
  // At w = 1 the per-node decay factor is exact; only the trapezoid time
  // integral carries discretization error.
  CHECK(sup < 1e-6);

  const double i1_exact = grid.inv_speed_mass() / (1.0 - m1);
  CHECK(sol.i1 == doctest::Approx(i1_exact).epsilon(5e-3));

  const auto sol2 = solve_lyapunov(p, grid, 2, cfg);
  for (double v : sol2.trajectory.states.front()) CHECK(v == 0.0);
}

TEST_CASE("lyapunov: E1 bound holds for coupled runs") {
  const auto p = unit_ag(2.0, 0.25);
  const RGrid grid = p.mixture.discretize(64);
  const auto sol = solve_lyapunov(p, grid, 1, SolverConfig{});
  const double bound = (1.0 - p.w * p.m1()) / (1.0 - p.m1()) + 1e-9;
  for (const auto& state : sol.trajectory.states) {
    for (double v : state) {
      CHECK(v >= -1e-12);
      CHECK(v <= bound);
    }
  }
}

TEST_CASE("ag_mean matches the closed form") {
  for (double alpha : {4.0, 2.0}) {
    for (double w : {0.0, 0.5, 1.0}) {
      const auto p = unit_ag(alpha, w);
      const RGrid grid = p.mixture.discretize(128);
      const double mean = ag_mean(p, grid, SolverConfig{});
      const double exact = superposed_mean(p);  // = 1 by construction
      CHECK(mean == doctest::Approx(exact).epsilon(5e-3));
    }
  }
}

TEST_CASE("ag_variance: w = 1 closed form, ordering, route agreement") {
  const auto prev_var = [](const ModelParams& p) {
    const auto q = ModelParams::make(ModelKind::Previous, p.b, 1.0, p.jump,
                                     p.mixture);
    return superposed_variance(q);
  };

  const auto p1 = unit_ag(4.0, 1.0);
  const RGrid grid = p1.mixture.discretize(128);
  const auto v1 = ag_variance(p1, grid, SolverConfig{});
  CHECK(v1.value == doctest::Approx(prev_var(p1)).epsilon(0.01));
  CHECK(v1.rel_gap < 0.02);

  double last = 0.0;
  for (double w : {0.0, 0.5}) {
    const auto p = unit_ag(4.0, w);
    const RGrid g = p.mixture.discretize(128);
    const auto v = ag_variance(p, g, SolverConfig{});
    const auto mf = ModelParams::make(ModelKind::MF, p.b, w, p.jump, p.mixture);
    CHECK(v.value >= superposed_variance(mf) - 1e-9);
    CHECK(v.value <= prev_var(p) * 1.01);
    CHECK(v.value > last);  // increasing in w
    last = v.value;
  }
}

TEST_CASE("mgf finite differences reproduce ag_mean") {
  const auto p = unit_ag(4.0, 0.5);
  const RGrid grid = p.mixture.discretize(128);
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const double mean = ag_mean(p, grid, cfg);
  const double h = 1e-4 / mean;
  const double m2h = mgf(solve_riccati(p, grid, 2.0 * h, cfg));
  const double fd = (1.0 - m2h) / (2.0 * h);  // central difference about h
  CHECK(fd == doctest::Approx(mean).epsilon(0.01));
}

TEST_CASE("refinement: halved dt and doubled grid move ag_variance < 0.5%") {
  const auto p = unit_ag(4.0, 0.5);
  SolverConfig coarse;
  coarse.dt = 1e-3;
  SolverConfig fine;
  fine.dt = 5e-4;
  const double v_coarse =
      ag_variance(p, p.mixture.discretize(128), coarse).value;
  const double v_fine = ag_variance(p, p.mixture.discretize(256), fine).value;
  CHECK(std::abs(v_fine / v_coarse - 1.0) < 5e-3);
}

TEST_CASE("riccati module rejects non-AG parameters") {
  const auto mf = ModelParams::make(ModelKind::MF, 1.0, 0.5,
                                    JumpMeasure(0.5, 1.0),
                                    ReversionMixture::dirac(1.0));
  const RGrid grid = mf.mixture.discretize(1);
  CHECK_THROWS_AS(solve_riccati(mf, grid, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_lyapunov(mf, grid, 3, SolverConfig{}),
                  std::invalid_argument);
}
