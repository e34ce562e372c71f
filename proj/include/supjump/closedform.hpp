#pragma once

#include <functional>
#include <optional>

#include "supjump/measures.hpp"

namespace supjump {

enum class ModelKind { Previous, MF, AG };

const char* to_string(ModelKind kind);

// Full specification of one superposed process.
struct ModelParams {
  ModelKind kind;
  double b;  // source rate, individuals per day
  double w;  // self-excitation weight in [0,1]; Previous forces w = 1
  JumpMeasure jump;
  ReversionMixture mixture;

  static ModelParams make(ModelKind kind, double b, double w, JumpMeasure jump,
                          ReversionMixture mixture);

  double m1() const { return jump.m1(); }
};

// Stationary statistics of a single mean-reverting component.
struct StationaryStats {
  double mean;
  double variance;
  double skewness;
  double jump_rate;
  std::function<double(double)> acf;  // of the lag tau
};

// One component with reversion speed r.  Setting w = 1 recovers the plain
// self-exciting case; w < 1 replaces part of the feedback by the mean-field
// constant, which lowers the variance and speeds up the ACF decay.
StationaryStats nominal_stats(double r, double b, const JumpMeasure& jump,
                              double w);

// Superposed-process statistics.  Mean and jump rate are shared by all three
// kinds; variance/ACF/skewness below are the Previous/MF closed forms and
// reject AG (no closed form exists -- use the riccati module or Monte Carlo).
double superposed_mean(const ModelParams& p);
double superposed_variance(const ModelParams& p);
double superposed_acf(const ModelParams& p, double tau);
double superposed_skewness_mf(const ModelParams& p);
double superposed_jump_rate(const ModelParams& p);

// Raw-formula versions used by the fitting pipeline, where intermediate
// parameter combinations may be formally nonstationary (M1 >= 1, b <= 0)
// and still need to be evaluated.  R is the mixing measure's r^{-1} mass.
double mf_variance_formula(double b, double w, const JumpMeasure& jump, double R);
double mf_skewness_formula(double b, double w, const JumpMeasure& jump, double R);

// H = 3/2 - alpha/2 for Gamma shape alpha in (1,3); empty outside that range.
std::optional<double> hurst_exponent(double alpha);

struct Nondimensionalized {
  double t_scale;  // days
  double x_scale;  // individuals
  ModelParams params;
};

// Rescale time and state so the source rate and the stationary mean both
// become 1.  Gamma mixture only (the scale parameter carries the time unit).
Nondimensionalized nondimensionalize(const ModelParams& p);

}  // namespace supjump
