#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "supjump/closedform.hpp"
#include "supjump/measures.hpp"

namespace supjump {

constexpr std::uint64_t kDefaultSeed = 776151;

// Monte Carlo configuration.  burn_in < 0 means "automatic": twenty times the
// model's natural time unit R/(1-M1).
struct SimConfig {
  std::size_t n = 512;          // grid size used by the CLI to discretize
  double dt = 5e-4;
  double burn_in = -1.0;
  double horizon = 200.0;
  double sample_every = 0.25;   // output sampling interval
  std::size_t replicates = 200;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;              // 0 = hardware concurrency
};

struct SamplePath {
  std::vector<double> times;  // after burn-in, spaced by sample_every
  std::vector<double> z;      // superposed value, sum over components
  std::uint64_t stream_key = 0;
  std::size_t jump_count = 0;     // jumps inside the output window
  double max_step_prob = 0.0;     // max lambda*dt seen (thinning diagnostic)
  bool step_prob_warning = false; // some step had lambda*dt > 0.1
};

// One path of the n-dimensional interacting system.  Per step: exact
// mean-reverting decay toward b*pi_i/r_i, then at most one jump by Bernoulli
// thinning of the kind-dependent intensity.  Components start at their
// stationary means b*pi_i/(r_i*(1-M1)); the burn-in window is discarded.
// Identical (seed, replicate_index) gives a bit-identical path.
SamplePath simulate_path(const ModelParams& p, const RGrid& grid,
                         const SimConfig& cfg, std::size_t replicate_index,
                         const std::optional<std::vector<double>>& initial =
                             std::nullopt);

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct LagEstimate {
  double lag = 0.0;
  double value = 0.0;
  double se = 0.0;
};

struct EnsembleStats {
  Estimate mean, variance, skewness, jump_rate;
  std::vector<LagEstimate> acf;
  std::size_t replicates = 0;
  bool step_prob_warning = false;
};

// Time-average within each replicate, then average across replicates;
// standard errors from the across-replicate dispersion.  Replicates run in
// parallel; the reduction is ordered by replicate index, so results are
// independent of the thread count.
EnsembleStats ensemble_stats(const ModelParams& p, const RGrid& grid,
                             const SimConfig& cfg,
                             const std::vector<double>& lags);

}  // namespace supjump
