#include "supjump/closedform.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace supjump {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Previous: return "previous";
    case ModelKind::MF: return "mf";
    case ModelKind::AG: return "ag";
  }
  return "?";
}

ModelParams ModelParams::make(ModelKind kind, double b, double w,
                              JumpMeasure jump, ReversionMixture mixture) {
  if (!(b > 0.0)) throw std::invalid_argument("ModelParams: b must be > 0");
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument("ModelParams: w must lie in [0,1]");
  }
  if (kind == ModelKind::Previous && w != 1.0) {
    throw std::invalid_argument("ModelParams: Previous kind requires w = 1");
  }
  if (!jump.stationary()) {
    throw NonstationaryError("ModelParams: M1 = " + std::to_string(jump.m1()) +
                             " is not < 1");
  }
  return ModelParams{kind, b, w, std::move(jump), std::move(mixture)};
}

StationaryStats nominal_stats(double r, double b, const JumpMeasure& jump,
                              double w) {
  if (!(r > 0.0)) throw std::invalid_argument("nominal_stats: r must be > 0");
  if (!(b > 0.0)) throw std::invalid_argument("nominal_stats: b must be > 0");
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument("nominal_stats: w must lie in [0,1]");
  }
  const double m1 = jump.m1();
  if (!(m1 < 1.0)) {
    throw NonstationaryError("nominal_stats: M1 = " + std::to_string(m1) +
                             " is not < 1");
  }
  const double m2 = jump.moment(2);
  const double m3 = jump.moment(3);
  StationaryStats s;
  s.mean = b / (r * (1.0 - m1));
  s.variance = m2 * b / (2.0 * r * (1.0 - m1) * (1.0 - w * m1));
  s.skewness = std::pow(s.variance, -1.5) * b /
               ((1.0 - m1) * (1.0 - w * m1)) * (m3 / 3.0 + w * m2 * m2 / 2.0) /
               r;
  s.jump_rate = jump.moment(0) * b / (1.0 - m1);
  const double c = r * (1.0 - w * m1);
  s.acf = [c](double tau) { return std::exp(-c * tau); };
  return s;
}

double superposed_mean(const ModelParams& p) {
  return p.b * p.mixture.inv_speed_mass() / (1.0 - p.m1());
}

double mf_variance_formula(double b, double w, const JumpMeasure& jump,
                           double R) {
  const double m1 = jump.m1();
  return jump.moment(2) * b * R / (2.0 * (1.0 - m1) * (1.0 - w * m1));
}

double mf_skewness_formula(double b, double w, const JumpMeasure& jump,
                           double R) {
  const double m1 = jump.m1();
  const double m2 = jump.moment(2);
  const double m3 = jump.moment(3);
  const double v = mf_variance_formula(b, w, jump, R);
  return std::pow(v, -1.5) * b / ((1.0 - m1) * (1.0 - w * m1)) *
         (m3 / 3.0 + w * m2 * m2 / 2.0) * R;
}

double superposed_variance(const ModelParams& p) {
  if (p.kind == ModelKind::AG) {
    throw UnsupportedClosedFormError(
        "superposed_variance: no closed form for the AG kind; use "
        "riccati::ag_variance");
  }
  return mf_variance_formula(p.b, p.w, p.jump, p.mixture.inv_speed_mass());
}

double superposed_acf(const ModelParams& p, double tau) {
  if (p.kind == ModelKind::AG) {
    throw UnsupportedClosedFormError(
        "superposed_acf: no closed form for the AG kind; use Monte Carlo");
  }
  return p.mixture.acf_kernel(1.0 - p.w * p.m1(), tau);
}

double superposed_skewness_mf(const ModelParams& p) {
  if (p.kind == ModelKind::AG) {
    throw UnsupportedClosedFormError(
        "superposed_skewness_mf: no closed form for the AG kind");
  }
  return mf_skewness_formula(p.b, p.w, p.jump, p.mixture.inv_speed_mass());
}

double superposed_jump_rate(const ModelParams& p) {
  return p.jump.moment(0) * p.b / (1.0 - p.m1());
}

std::optional<double> hurst_exponent(double alpha) {
  if (!(alpha > 1.0)) {
    throw std::domain_error("hurst_exponent: alpha must be > 1");
  }
  if (alpha >= 3.0) return std::nullopt;
  return 1.5 - 0.5 * alpha;
}

Nondimensionalized nondimensionalize(const ModelParams& p) {
  if (p.mixture.kind() != ReversionMixture::Kind::Gamma) {
    throw UnsupportedClosedFormError(
        "nondimensionalize: only Gamma mixtures carry a beta time scale");
  }
  const double alpha = p.mixture.gamma_shape();
  const double beta = p.mixture.gamma_scale();
  const double m1 = p.m1();
  const double t_scale = 1.0 / ((1.0 - m1) * beta * (alpha - 1.0));
  const double x_scale = p.b * t_scale;
  // Time in units of t_scale, state in units of x_scale: rates scale by
  // t_scale, jump sizes by 1/x_scale.  M1 and w are invariant; the new
  // source rate and stationary mean are both 1.
  ModelParams scaled = ModelParams::make(
      p.kind, 1.0, p.w, JumpMeasure(p.jump.mu * x_scale, p.jump.lambda * x_scale),
      ReversionMixture::gamma(alpha, beta * t_scale));
  return Nondimensionalized{t_scale, x_scale, std::move(scaled)};
}

}  // namespace supjump
