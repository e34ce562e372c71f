#include "supjump/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "supjump/rng.hpp"

namespace supjump {

namespace {

std::int64_t steps_for(double interval, double dt, const char* what) {
  const double raw = interval / dt;
  const std::int64_t k = std::llround(raw);
  if (k < 1 || std::abs(static_cast<double>(k) - raw) > 1e-9 * std::max(1.0, raw)) {
    throw ConfigError(std::string(what) +
                      " must be a positive multiple of dt (got " +
                      std::to_string(interval) + " / " + std::to_string(dt) + ")");
  }
  return k;
}

double auto_burn_in(const ModelParams& p, const RGrid& grid) {
  return 20.0 * grid.inv_speed_mass() / (1.0 - p.m1());
}

struct ReplicateStats {
  double mean = 0.0, var = 0.0, skw = 0.0, jump_rate = 0.0;
  std::vector<double> acf;
  bool warned = false;
};

// Within-replicate moments use the replicate's own time average.  The ACF is
// the pooled-segments estimator: products are centered on the grand mean
// across all replicates and normalized by the pooled variance, which removes
// the O(1/T) centering and ratio biases of per-segment estimators; the
// across-replicate spread of these values still gives a valid standard error.
ReplicateStats path_stats(const SamplePath& path, double horizon,
                          const std::vector<std::int64_t>& lag_steps,
                          double pooled_mean, double pooled_var) {
  const auto& z = path.z;
  const std::size_t m = z.size();
  ReplicateStats st;
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(m);
  double m2 = 0.0, m3 = 0.0;
  for (double v : z) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(m);
  m3 /= static_cast<double>(m);
  st.mean = mean;
  st.var = m2;
  st.skw = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  st.jump_rate = static_cast<double>(path.jump_count) / horizon;
  st.warned = path.step_prob_warning;

  st.acf.reserve(lag_steps.size());
  for (std::int64_t k : lag_steps) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < m; ++t) {
      num += (z[t] - pooled_mean) * (z[t + k] - pooled_mean);
    }
    const double denom =
        pooled_var * static_cast<double>(m - static_cast<std::size_t>(k));
    st.acf.push_back(denom > 0.0 ? num / denom : 0.0);
  }
  return st;
}

Estimate across(const std::vector<double>& xs) {
  const double r = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= r;
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  const double sd = r > 1.0 ? std::sqrt(ss / (r - 1.0)) : 0.0;
  return Estimate{mean, sd / std::sqrt(r)};
}

}  // namespace

SamplePath simulate_path(const ModelParams& p, const RGrid& grid,
                         const SimConfig& cfg, std::size_t replicate_index,
                         const std::optional<std::vector<double>>& initial) {
  if (!p.jump.stationary()) {
    throw NonstationaryError("simulate_path: M1 must be < 1");
  }
  grid.validate();
  const std::size_t n = grid.size();
  const double m1 = p.m1();
  const double m0 = p.jump.moment(0);
  const double mean_field = (1.0 - p.w) * p.b / (1.0 - m1);  // MF constant term

  const double burn_in = cfg.burn_in >= 0.0 ? cfg.burn_in : auto_burn_in(p, grid);
  const std::int64_t steps_per_sample = steps_for(cfg.sample_every, cfg.dt, "sample_every");
  // Burn-in is rounded up to whole steps; it only needs to cover transients.
  const std::int64_t burn_steps =
      static_cast<std::int64_t>(std::ceil(burn_in / cfg.dt - 1e-9));
  const std::int64_t out_steps = steps_for(cfg.horizon, cfg.dt, "horizon");

  std::vector<double> y(n), decay(n), carry(n), rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double base = p.b * grid.weights[i] / grid.nodes[i];
    decay[i] = std::exp(-grid.nodes[i] * cfg.dt);
    carry[i] = base * (1.0 - decay[i]);
    y[i] = base / (1.0 - m1);  // stationary mean of the component
  }
  if (initial) {
    if (initial->size() != n) {
      throw ConfigError("simulate_path: initial state size mismatch");
    }
    y = *initial;
  }

  StreamRng rng(cfg.seed, replicate_index);
  SamplePath path;
  path.stream_key = rng.key();
  path.times.reserve(static_cast<std::size_t>(out_steps / steps_per_sample) + 1);
  path.z.reserve(path.times.capacity());

  const std::int64_t total_steps = burn_steps + out_steps;
  for (std::int64_t step = 1; step <= total_steps; ++step) {
    // (1) exact decay toward the no-jump baseline; weighted state sum on the fly
    double s1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = carry[i] + y[i] * decay[i];
      s1 += grid.nodes[i] * y[i];
    }
    // (2) total jump intensity; Previous and AG share it, MF mixes in the constant
    const double total_rate =
        p.kind == ModelKind::MF ? p.w * s1 + mean_field : s1;
    const double prob = m0 * total_rate * cfg.dt;
    if (prob > 1.0) {
      throw SolverError("simulate_path: jump probability " + std::to_string(prob) +
                        " exceeds 1; reduce dt");
    }
    path.max_step_prob = std::max(path.max_step_prob, prob);
    if (prob > 0.1) path.step_prob_warning = true;

    // (3) at most one jump, component chosen proportional to its rate
    if (rng.next_unit() < prob) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double ri;
        switch (p.kind) {
          case ModelKind::Previous: ri = grid.nodes[i] * y[i]; break;
          case ModelKind::MF:
            ri = p.w * grid.nodes[i] * y[i] + mean_field * grid.weights[i];
            break;
          case ModelKind::AG:
          default:
            ri = p.w * grid.nodes[i] * y[i] + (1.0 - p.w) * grid.weights[i] * s1;
            break;
        }
        rate[i] = ri;
        total += ri;
      }
      double u = rng.next_unit() * total;
      std::size_t target = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        u -= rate[i];
        if (u <= 0.0) {
          target = i;
          break;
        }
      }
      y[target] += rng.next_exponential(p.jump.lambda);
      if (step > burn_steps) ++path.jump_count;
    }

    if (step > burn_steps && (step - burn_steps) % steps_per_sample == 0) {
      double z = 0.0;
      for (double v : y) z += v;
      path.times.push_back(static_cast<double>(step - burn_steps) * cfg.dt);
      path.z.push_back(z);
    }
  }
  return path;
}

EnsembleStats ensemble_stats(const ModelParams& p, const RGrid& grid,
                             const SimConfig& cfg,
                             const std::vector<double>& lags) {
  if (cfg.replicates < 2) {
    throw ConfigError("ensemble_stats: need at least 2 replicates");
  }
  std::vector<std::int64_t> lag_steps;
  lag_steps.reserve(lags.size());
  for (double lag : lags) {
    if (lag > cfg.horizon) {
      throw ConfigError("ensemble_stats: lag " + std::to_string(lag) +
                        " exceeds the horizon");
    }
    lag_steps.push_back(lag > 0.0 ? steps_for(lag, cfg.sample_every, "lag") : 0);
  }

  const std::size_t reps = cfg.replicates;
  std::vector<SamplePath> paths(reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= reps) return;
      try {
        paths[idx] = simulate_path(p, grid, cfg, idx);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  unsigned hw = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                : std::max(1u, std::thread::hardware_concurrency());
  hw = std::min<unsigned>(hw, static_cast<unsigned>(reps));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < hw; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  double pooled_mean = 0.0;
  std::size_t pooled_count = 0;
  for (const auto& path : paths) {
    for (double v : path.z) pooled_mean += v;
    pooled_count += path.z.size();
  }
  pooled_mean /= static_cast<double>(pooled_count);
  double pooled_var = 0.0;
  for (const auto& path : paths) {
    for (double v : path.z) pooled_var += (v - pooled_mean) * (v - pooled_mean);
  }
  pooled_var /= static_cast<double>(pooled_count);

  std::vector<ReplicateStats> per_rep(reps);
  for (std::size_t i = 0; i < reps; ++i) {
    per_rep[i] =
        path_stats(paths[i], cfg.horizon, lag_steps, pooled_mean, pooled_var);
  }

  auto collect = [&](auto getter) {
    std::vector<double> xs(reps);
    for (std::size_t i = 0; i < reps; ++i) xs[i] = getter(per_rep[i]);
    return across(xs);
  };

  EnsembleStats out;
  out.replicates = reps;
  out.mean = collect([](const ReplicateStats& s) { return s.mean; });
  out.variance = collect([](const ReplicateStats& s) { return s.var; });
  out.skewness = collect([](const ReplicateStats& s) { return s.skw; });
  out.jump_rate = collect([](const ReplicateStats& s) { return s.jump_rate; });
  for (std::size_t k = 0; k < lags.size(); ++k) {
    const Estimate e =
        collect([k](const ReplicateStats& s) { return s.acf[k]; });
    out.acf.push_back(LagEstimate{lags[k], e.value, e.se});
  }
  for (const auto& s : per_rep) out.step_prob_warning |= s.warned;
  return out;
}

}  // namespace supjump
