#include "supjump/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace supjump {

namespace {

void require_ag(const ModelParams& p, const char* where) {
  if (p.kind != ModelKind::AG) {
    throw std::invalid_argument(std::string(where) +
                                ": expects AG model parameters");
  }
  if (!p.jump.stationary()) {
    throw NonstationaryError(std::string(where) + ": M1 must be < 1");
  }
}

// Bounded snapshot recorder with stride doubling.
class Recorder {
 public:
  Recorder(std::size_t cap, Trajectory* out) : cap_(std::max<std::size_t>(cap, 8)), out_(out) {}

  void record(double t, const std::vector<double>& state, bool force = false) {
    if (!force && (step_++ % stride_) != 0) return;
    out_->times.push_back(t);
    out_->states.push_back(state);
    if (out_->times.size() >= 2 * cap_) thin();
  }

 private:
  void thin() {
    std::size_t j = 0;
    for (std::size_t i = 0; i < out_->times.size(); i += 2, ++j) {
      if (i != j) {
        out_->times[j] = out_->times[i];
        out_->states[j] = std::move(out_->states[i]);
      }
    }
    out_->times.resize(j);
    out_->states.resize(j);
    stride_ *= 2;
  }

  std::size_t cap_;
  std::size_t stride_ = 1;
  std::size_t step_ = 0;
  Trajectory* out_;
};

}  // namespace

RiccatiSolution solve_riccati(const ModelParams& p, const RGrid& grid,
                              double theta, const SolverConfig& cfg) {
  require_ag(p, "solve_riccati");
  if (!(theta >= 0.0)) {
    throw std::invalid_argument("solve_riccati: theta must be >= 0");
  }
  grid.validate();

  const std::size_t n = grid.size();
  const double m1 = p.m1();
  const double upper = theta / (1.0 - m1) + 1e-9;
  const double w = p.w;

  std::vector<double> decay(n), b_state(n, theta), excite(n);
  for (std::size_t i = 0; i < n; ++i) decay[i] = std::exp(-grid.nodes[i] * cfg.dt);

  RiccatiSolution sol;
  sol.grid = grid;
  sol.theta = theta;
  sol.dt = cfg.dt;
  Recorder rec(cfg.max_snapshots, &sol.trajectory);
  rec.record(0.0, b_state, true);

  auto weighted_sum = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += grid.weights[i] * v[i];
    return s;
  };

  double t = 0.0;
  double s_prev = weighted_sum(b_state);
  double a_accum = 0.0;
  double running_max = theta;
  double peak = theta;
  bool past_peak = false;

  while (t < cfg.t_max) {
    double max_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_b = std::max(max_b, b_state[i]);
    if (max_b <= cfg.tol * theta) break;

    double agg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      excite[i] = p.jump.excitation_transform(b_state[i]);
      agg += grid.weights[i] * excite[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double frozen = w * excite[i] + (1.0 - w) * agg;
      const double next = b_state[i] * decay[i] + frozen * (1.0 - decay[i]);
      if (!(next >= -1e-12) || !(next <= upper)) {
        throw SolverError("solve_riccati: bound violated at t=" +
                          std::to_string(t) + ", node " + std::to_string(i) +
                          "; reduce dt");
      }
      b_state[i] = next;
    }
    t += cfg.dt;

    const double s_now = weighted_sum(b_state);
    a_accum += 0.5 * (s_prev + s_now) * cfg.dt;
    s_prev = s_now;
    rec.record(t, b_state);

    // Diagnostic only: the running max should not rebound once decay starts.
    double mb = 0.0;
    for (double v : b_state) mb = std::max(mb, v);
    if (mb > peak) {
      peak = mb;
    } else {
      past_peak = true;
    }
    if (past_peak && mb > running_max + 1e-12 * std::max(1.0, peak)) {
      sol.max_decay_monotone = false;
    }
    running_max = mb;
  }

  sol.horizon = t;
  sol.truncated = t >= cfg.t_max;
  rec.record(t, b_state, true);
  sol.exponent = p.b * a_accum;

  double tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tail += grid.weights[i] * b_state[i] / (grid.nodes[i] * (1.0 - m1));
  }
  sol.tail_bound = p.b * tail;
  return sol;
}

double mgf(const RiccatiSolution& sol) { return std::exp(-sol.exponent); }

LyapunovSolution solve_lyapunov(const ModelParams& p, const RGrid& grid,
                                int order, const SolverConfig& cfg) {
  require_ag(p, "solve_lyapunov");
  if (order != 1 && order != 2) {
    throw std::invalid_argument("solve_lyapunov: order must be 1 or 2");
  }
  grid.validate();

  const std::size_t n = grid.size();
  const double m1 = p.m1();
  const double m2 = p.jump.moment(2);
  const double w = p.w;
  const double lin = 1.0 - w * m1;          // per-node linear decay factor
  const double couple = (1.0 - w) * m1;     // strength of the mixing feedback
  const double e1_upper = lin / (1.0 - m1) + 1e-9;

  std::vector<double> decay(n), e1(n, 1.0), e2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    decay[i] = std::exp(-grid.nodes[i] * lin * cfg.dt);
  }

  LyapunovSolution sol;
  sol.grid = grid;
  sol.order = order;
  sol.dt = cfg.dt;
  Recorder rec(cfg.max_snapshots, &sol.trajectory);
  rec.record(0.0, order == 1 ? e1 : e2, true);

  auto weighted_sum = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += grid.weights[i] * v[i];
    return s;
  };

  double t = 0.0;
  double s1_prev = weighted_sum(e1);
  double s2_prev = 0.0;
  double q_prev = s1_prev * s1_prev;
  double peak_e2 = 0.0;

  while (t < cfg.t_max) {
    double max_e1 = 0.0, max_e2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      max_e1 = std::max(max_e1, e1[i]);
      if (order == 2) max_e2 = std::max(max_e2, e2[i]);
    }
    const bool e1_done = max_e1 <= cfg.tol;
    const bool e2_done =
        order == 1 || peak_e2 <= 0.0 || max_e2 <= cfg.tol * peak_e2;
    if (e1_done && e2_done) break;

    const double s1 = weighted_sum(e1);
    double sq = 0.0, s2 = 0.0;
    if (order == 2) {
      for (std::size_t i = 0; i < n; ++i) {
        sq += grid.weights[i] * e1[i] * e1[i];
        s2 += grid.weights[i] * e2[i];
      }
    }
    // Frozen sources divided by the linear rate: E' = -a(E - src), a = r*lin.
    const double src1 = couple * s1 / lin;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = decay[i];
      double next2 = 0.0;
      if (order == 2) {
        const double src2 =
            (couple * s2 + m2 * (w * e1[i] * e1[i] + (1.0 - w) * sq)) / lin;
        next2 = e2[i] * d + src2 * (1.0 - d);
      }
      const double next1 = e1[i] * d + src1 * (1.0 - d);
      if (!(next1 >= -1e-12) || !(next1 <= e1_upper) ||
          (order == 2 && !(next2 >= -1e-12))) {
        throw SolverError("solve_lyapunov: bound violated at t=" +
                          std::to_string(t) + ", node " + std::to_string(i) +
                          "; reduce dt");
      }
      e1[i] = next1;
      if (order == 2) e2[i] = next2;
    }
    t += cfg.dt;

    const double s1_now = weighted_sum(e1);
    sol.i1 += 0.5 * (s1_prev + s1_now) * cfg.dt;
    sol.q += 0.5 * (q_prev + s1_now * s1_now) * cfg.dt;
    s1_prev = s1_now;
    q_prev = s1_now * s1_now;
    if (order == 2) {
      const double s2_now = weighted_sum(e2);
      sol.i2 += 0.5 * (s2_prev + s2_now) * cfg.dt;
      s2_prev = s2_now;
      double mx = 0.0;
      for (double v : e2) mx = std::max(mx, v);
      peak_e2 = std::max(peak_e2, mx);
    }
    rec.record(t, order == 1 ? e1 : e2);
  }

  sol.horizon = t;
  sol.truncated = t >= cfg.t_max;
  rec.record(t, order == 1 ? e1 : e2, true);

  double tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tail += grid.weights[i] * e1[i] / (grid.nodes[i] * (1.0 - m1));
  }
  sol.tail_i1 = tail;
  return sol;
}

double ag_mean(const ModelParams& p, const RGrid& grid,
               const SolverConfig& cfg) {
  const LyapunovSolution sol = solve_lyapunov(p, grid, 1, cfg);
  return p.b * sol.i1;
}

AgVariance ag_variance(const ModelParams& p, const RGrid& grid,
                       const SolverConfig& cfg) {
  const LyapunovSolution sol = solve_lyapunov(p, grid, 2, cfg);
  const double m1 = p.m1();
  const double m2 = p.jump.moment(2);
  const double grid_r = grid.inv_speed_mass();

  AgVariance v;
  v.route_lyapunov = p.b * sol.i2;
  v.route_identity = p.b * m2 / ((1.0 - m1) * (1.0 - p.w * m1)) *
                     (0.5 * grid_r + (1.0 - p.w) * m1 * sol.q);
  v.value = v.route_identity;
  v.rel_gap = std::abs(v.route_lyapunov - v.route_identity) /
              std::max(std::abs(v.route_identity), 1e-300);
  if (v.rel_gap > 0.02) {
    throw SolverError(
        "ag_variance: variance routes disagree by " + std::to_string(v.rel_gap) +
        " (relative); refine the grid or reduce dt");
  }
  return v;
}

}  // namespace supjump
