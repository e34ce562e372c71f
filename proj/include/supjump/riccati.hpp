#pragma once

#include <cstddef>
#include <vector>

#include "supjump/closedform.hpp"
#include "supjump/measures.hpp"

namespace supjump {

// Time-stepping controls shared by the Riccati and Lyapunov solves.  The
// integrator is a first-order exponential (integrating-factor) scheme: the
// per-node linear decay is applied exactly via exp(-a_i dt) while nonlinear
// and coupling terms are frozen over the step, so stiffness from widely
// spread reversion speeds costs nothing.
struct SolverConfig {
  double dt = 1e-3;
  double tol = 1e-10;    // stop once the state has decayed below tol * scale
  double t_max = 1e4;    // hard horizon; hitting it sets `truncated`
  std::size_t max_snapshots = 400;
};

// Decimated trajectory storage: every stored row is the full node vector at
// one time.  The stride doubles whenever the buffer would exceed its cap.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

struct RiccatiSolution {
  RGrid grid;
  double theta = 0.0;
  double dt = 0.0;
  double horizon = 0.0;       // time at which the solve stopped
  Trajectory trajectory;      // B_t(r_i)
  double exponent = 0.0;      // A = b * time integral of sum_i pi_i B_t(r_i)
  double tail_bound = 0.0;    // analytic bound on the truncated part of A
  bool truncated = false;     // stopped by t_max rather than decay
  bool max_decay_monotone = true;  // diagnostic: max_i B nonincreasing after peak
};

// Integrate dB_i/dt = r_i * (-B_i + w*g(B_i) + (1-w)*sum_j pi_j g(B_j)) from
// B = theta, where g is the exponential-measure excitation transform
// mu*B/(lambda+B).  The solution obeys 0 <= B <= theta/(1-M1) at every step;
// a violation (or NaN) raises SolverError asking for a smaller dt.
RiccatiSolution solve_riccati(const ModelParams& p, const RGrid& grid,
                              double theta, const SolverConfig& cfg = {});

// Moment generating function value exp(-A).
double mgf(const RiccatiSolution& sol);

struct LyapunovSolution {
  RGrid grid;
  int order = 1;
  double dt = 0.0;
  double horizon = 0.0;
  Trajectory trajectory;   // E_t(order, r_i)
  double i1 = 0.0;         // time integral of sum_i pi_i E_t(1, r_i)
  double i2 = 0.0;         // time integral of sum_i pi_i E_t(2, r_i) (order 2)
  double q = 0.0;          // time integral of (sum_i pi_i E_t(1, r_i))^2
  double tail_i1 = 0.0;
  bool truncated = false;
};

// First- and second-order moment equations of the AG model.  Order 1 starts
// from E = 1 and obeys 0 <= E <= (1-w*M1)/(1-M1); order 2 co-integrates
// order 1 (its square is the source term) and stays nonnegative.
LyapunovSolution solve_lyapunov(const ModelParams& p, const RGrid& grid,
                                int order, const SolverConfig& cfg = {});

// Stationary mean b * I1; agrees with the closed form b*R/(1-M1).
double ag_mean(const ModelParams& p, const RGrid& grid,
               const SolverConfig& cfg = {});

struct AgVariance {
  double value = 0.0;            // the identity route (returned value)
  double route_lyapunov = 0.0;   // b * I2
  double route_identity = 0.0;   // b*M2/((1-M1)(1-wM1)) * (R/2 + (1-w)*M1*Q)
  double rel_gap = 0.0;
};

// Stationary variance computed two ways and cross-checked; a gap above 2%
// raises SolverError (refine the grid or dt).
AgVariance ag_variance(const ModelParams& p, const RGrid& grid,
                       const SolverConfig& cfg = {});

}  // namespace supjump
