#include "supjump/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace supjump {

namespace {

constexpr double kGradTol = 1e-10;
constexpr int kMaxIter = 400;

struct LmState {
  double u, v;        // log(alpha-1), log(beta_tilde)
  double sse;
  double grad_norm;
  bool converged;
};

// Levenberg-Marquardt in (u,v) = (log(alpha-1), log(beta_tilde)).
LmState lm_from_start(const std::vector<std::pair<double, double>>& rho,
                      double u0, double v0) {
  double u = u0, v = v0;
  double lm = 1e-3;

  auto eval = [&rho](double uu, double vv, double* g0, double* g1, double h[3]) {
    const double am1 = std::exp(uu), bt = std::exp(vv);
    double sse = 0.0;
    if (g0) *g0 = 0.0;
    if (g1) *g1 = 0.0;
    if (h) h[0] = h[1] = h[2] = 0.0;
    for (const auto& [tau, val] : rho) {
      const double l1p = std::log1p(bt * tau);
      const double m = std::exp(-am1 * l1p);
      const double r = val - m;
      sse += r * r;
      if (g0) {
        // dr/du = m * am1 * l1p ; dr/dv = m * am1 * bt*tau/(1+bt*tau)
        const double ju = m * am1 * l1p;
        const double jv = m * am1 * bt * tau / (1.0 + bt * tau);
        *g0 += ju * r;
        *g1 += jv * r;
        h[0] += ju * ju;
        h[1] += ju * jv;
        h[2] += jv * jv;
      }
    }
    return sse;
  };

  double g0, g1, h[3];
  double sse = eval(u, v, &g0, &g1, h);
  bool converged = false;
  for (int it = 0; it < kMaxIter; ++it) {
    const double gn = std::max(std::abs(g0), std::abs(g1));
    if (gn < kGradTol) {
      converged = true;
      break;
    }
    // Solve (H + lm*diag(H)) d = -g.
    bool stepped = false;
    for (int tries = 0; tries < 40; ++tries) {
      const double a00 = h[0] * (1.0 + lm), a01 = h[1], a11 = h[2] * (1.0 + lm);
      const double det = a00 * a11 - a01 * a01;
      if (!(std::abs(det) > 1e-300)) {
        lm *= 10.0;
        continue;
      }
      const double du = (-g0 * a11 + g1 * a01) / det;
      const double dv = (-g1 * a00 + g0 * a01) / det;
      const double nu = u + du, nv = v + dv;
      const double nsse = eval(nu, nv, nullptr, nullptr, nullptr);
      if (nsse <= sse) {
        u = nu;
        v = nv;
        lm = std::max(lm * 0.3, 1e-12);
        sse = eval(u, v, &g0, &g1, h);
        stepped = true;
        break;
      }
      lm *= 10.0;
    }
    if (!stepped) break;
    if (!std::isfinite(u) || !std::isfinite(v) || u > 60.0 || v > 60.0 ||
        u < -60.0 || v < -60.0) {
      break;  // wandered off to an unusable region
    }
  }
  return LmState{u, v, sse, std::max(std::abs(g0), std::abs(g1)), converged};
}

}  // namespace

AcfFit fit_acf(const std::vector<std::pair<double, double>>& rho_in) {
  std::vector<std::pair<double, double>> rho;
  rho.reserve(rho_in.size());
  for (const auto& [tau, val] : rho_in) {
    if (std::isfinite(tau) && std::isfinite(val) && tau > 0.0) {
      rho.emplace_back(tau, val);
    }
  }
  if (rho.size() < 3) {
    throw FitFailure("fit_acf: need at least 3 finite lags, got " +
                     std::to_string(rho.size()));
  }
  double min_val = std::numeric_limits<double>::infinity();
  for (const auto& [tau, val] : rho) min_val = std::min(min_val, val);
  if (min_val >= 1.0 - 1e-9) {
    throw FitFailure("fit_acf: autocorrelation shows no decay");
  }

  const double starts_am1[] = {0.1, 1.0, 10.0};
  const double starts_bt[] = {0.01, 1.0, 100.0};
  LmState best{};
  best.sse = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (double am1 : starts_am1) {
    for (double bt : starts_bt) {
      const LmState s = lm_from_start(rho, std::log(am1), std::log(bt));
      any_converged = any_converged || s.converged;
      if (s.converged && s.sse < best.sse) best = s;
    }
  }
  if (!any_converged) {
    throw FitFailure("fit_acf: no start converged (gradient tolerance 1e-10)");
  }
  AcfFit fit;
  fit.alpha = 1.0 + std::exp(best.u);
  fit.beta_tilde = std::exp(best.v);
  fit.objective = best.sse;
  fit.converged = true;
  return fit;
}

MomentMatch moment_match(const SummaryStats& stats, double alpha,
                         double beta_tilde, double w) {
  if (!(alpha > 1.0) || !(beta_tilde > 0.0)) {
    throw std::invalid_argument("moment_match: need alpha > 1, beta_tilde > 0");
  }
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument("moment_match: w must lie in [0,1]");
  }
  if (!(stats.jmp > 0.0) || !(stats.var > 0.0) || !(stats.ave > 0.0)) {
    throw std::invalid_argument(
        "moment_match: needs positive Ave, Var and Jmp");
  }
  const double g = beta_tilde * (alpha - 1.0);
  MomentMatch r;
  r.lambda = std::sqrt(stats.jmp / (g * stats.var));
  r.b = stats.ave * g - (1.0 - w) * stats.jmp / r.lambda;
  r.mu = stats.jmp * r.lambda / (stats.jmp + r.b * r.lambda);
  r.m1 = r.mu / r.lambda;
  r.beta = beta_tilde / (1.0 - w * r.m1);
  return r;
}

double realizability_bound(const SummaryStats& stats, double alpha,
                           double beta_tilde) {
  const double g = beta_tilde * (alpha - 1.0);
  return std::max(0.0, 1.0 - std::sqrt(g / (stats.jmp * stats.cv * stats.cv)));
}

FitResult fit_at_w(const SummaryStats& stats, double alpha, double beta_tilde,
                   double w) {
  const MomentMatch m = moment_match(stats, alpha, beta_tilde, w);
  FitResult r;
  r.alpha = alpha;
  r.beta_tilde = beta_tilde;
  r.beta = m.beta;
  r.lambda = m.lambda;
  r.b = m.b;
  r.mu = m.mu;
  r.w = w;
  r.m1 = m.m1;
  if (alpha < 3.0) r.hurst = 1.5 - 0.5 * alpha;
  r.long_memory = alpha <= 2.0;
  r.negative_b = !(m.b > 0.0);
  r.realizable_w_lower_bound = realizability_bound(stats, alpha, beta_tilde);
  // Theoretical skewness, evaluated formally from the matched parameters so
  // that negative-b / nonstationary rows are still reported.
  const double big_r = 1.0 / (m.beta * (alpha - 1.0));
  const double m1 = m.m1;
  const double m2 = 2.0 * m.mu / (m.lambda * m.lambda);
  const double m3 = 6.0 * m.mu / (m.lambda * m.lambda * m.lambda);
  const double v = m2 * m.b * big_r / (2.0 * (1.0 - m1) * (1.0 - w * m1));
  r.skewness_theory = std::pow(v, -1.5) * m.b / ((1.0 - m1) * (1.0 - w * m1)) *
                      (m3 / 3.0 + w * m2 * m2 / 2.0) * big_r;
  r.skewness_relative_error =
      std::abs(r.skewness_theory - stats.skw) / std::abs(stats.skw);
  return r;
}

std::pair<double, FitResult> fit_w(const SummaryStats& stats, double alpha,
                                   double beta_tilde) {
  auto objective = [&](double w) {
    const FitResult f = fit_at_w(stats, alpha, beta_tilde, w);
    const double e = f.skewness_relative_error;
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
  };

  // Dense grid, then golden-section inside the best bracket.
  constexpr double kStep = 1e-3;
  double best_w = 0.0, best_obj = objective(0.0);
  const int n = static_cast<int>(std::lround(1.0 / kStep));
  for (int i = 1; i <= n; ++i) {
    const double w = static_cast<double>(i) * kStep;
    const double o = objective(w);
    if (o < best_obj) {
      best_obj = o;
      best_w = w;
    }
  }
  double lo = std::max(0.0, best_w - kStep), hi = std::min(1.0, best_w + kStep);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double w_mid = 0.5 * (lo + hi);
  double w_star = best_w;
  double o_star = best_obj;
  if (objective(w_mid) < o_star) {
    w_star = w_mid;
    o_star = objective(w_mid);
  }
  return {w_star, fit_at_w(stats, alpha, beta_tilde, w_star)};
}

KappaFit kappa_regression(const std::vector<SummaryStats>& datasets) {
  if (datasets.size() < 2) {
    throw std::invalid_argument("kappa_regression: need at least 2 datasets");
  }
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& d : datasets) {
    sxy += d.skw * d.cv;
    sxx += d.cv * d.cv;
    syy += d.skw * d.skw;
  }
  if (!(sxx > 0.0)) throw Error("kappa_regression: all CV values are zero");
  KappaFit k;
  k.kappa = sxy / sxx;
  double ss_res = 0.0;
  for (const auto& d : datasets) {
    const double e = d.skw - k.kappa * d.cv;
    ss_res += e * e;
  }
  k.r2 = 1.0 - ss_res / syy;
  return k;
}

M1FromKappa m1_from_kappa(double w, double kappa) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("m1_from_kappa: kappa must be > 0");
  }
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument("m1_from_kappa: w must lie in [0,1]");
  }
  M1FromKappa out;
  if (w == 0.0) {
    out.m1 = 2.0 / kappa;
  } else {
    out.m1 = (-kappa + std::sqrt(kappa * kappa + 16.0 * w * w)) / (4.0 * w * w);
  }
  out.feasible = out.m1 < 1.0;
  return out;
}

}  // namespace supjump
