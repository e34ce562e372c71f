#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "supjump/closedform.hpp"
#include "supjump/empirical.hpp"

namespace supjump {

// Result of fitting one count series as a superposed process.
struct FitResult {
  double alpha = 0.0;
  double beta_tilde = 0.0;  // beta * (1 - w*M1), the ACF decay scale
  double beta = 0.0;
  double lambda = 0.0;
  double b = 0.0;
  double mu = 0.0;
  double w = 1.0;
  double m1 = 0.0;
  std::optional<double> hurst;           // populated iff alpha in (1,3)
  double realizable_w_lower_bound = 0.0; // smallest w with positive b
  double skewness_theory = 0.0;
  double skewness_relative_error = 0.0;
  bool negative_b = false;               // b <= 0 at this w (reported, not fatal)
  bool long_memory = false;              // alpha <= 2
};

struct AcfFit {
  double alpha = 0.0;
  double beta_tilde = 0.0;
  double objective = 0.0;  // sum of squared residuals at the solution
  bool converged = false;
};

// Least squares of (1 + beta_tilde*tau)^{-(alpha-1)} against empirical
// autocorrelations.  Fits log(alpha-1) and log(beta_tilde) from 9 multi-start
// points, Levenberg-Marquardt to residual-gradient norm < 1e-10.
AcfFit fit_acf(const std::vector<std::pair<double, double>>& rho);

struct MomentMatch {
  double lambda = 0.0;
  double b = 0.0;
  double mu = 0.0;
  double beta = 0.0;
  double m1 = 0.0;
};

// Exact inversion of (mean, variance, jump rate) given (alpha, beta_tilde, w):
// by construction the fitted model reproduces Ave, Var and Jmp identically.
// b <= 0 is possible for small w and is reported by the caller, not thrown.
MomentMatch moment_match(const SummaryStats& stats, double alpha,
                         double beta_tilde, double w);

// Smallest w guaranteeing b > 0:  max{0, 1 - sqrt(beta_tilde*(alpha-1) /
// (Jmp*CV^2))}.
double realizability_bound(const SummaryStats& stats, double alpha,
                           double beta_tilde);

// Full FitResult at a given weight.
FitResult fit_at_w(const SummaryStats& stats, double alpha, double beta_tilde,
                   double w);

// Pick w in [0,1] minimizing the relative skewness error (dense grid with
// step 1e-3, then golden-section refinement).  Boundary minima are valid.
std::pair<double, FitResult> fit_w(const SummaryStats& stats, double alpha,
                                   double beta_tilde);

struct KappaFit {
  double kappa = 0.0;
  double r2 = 0.0;  // uncentered R^2 of the through-origin fit
};

// Least squares through the origin of Skw against CV across datasets.
KappaFit kappa_regression(const std::vector<SummaryStats>& datasets);

struct M1FromKappa {
  double m1 = 0.0;
  bool feasible = false;  // m1 < 1
};

// Positive root of w^2 M1^2 + (kappa/2) M1 - 1 = 0; the linear case 2/kappa
// at w = 0.
M1FromKappa m1_from_kappa(double w, double kappa);

}  // namespace supjump
