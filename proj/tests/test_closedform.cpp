#include "supjump/closedform.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace supjump;

namespace {

ModelParams nagara_fitted(ModelKind kind, double w) {
  return ModelParams::make(kind, 2.071e4, w, JumpMeasure(8.190e-6, 2.130e-5),
                           ReversionMixture::gamma(1.438, 10.53));
}

}  // namespace

TEST_CASE("nominal component statistics") {
  const JumpMeasure half(1.0, 2.0);  // M1 = 0.5, M2 = 0.5

  SUBCASE("mean cancellation") {
    const auto s = nominal_stats(1.0, 1.0 - half.m1(), half, 1.0);
    CHECK(s.mean == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("hand-computed nominal values at w=1") {
    const auto s = nominal_stats(1.0, 1.0, half, 1.0);
    CHECK(s.mean == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s.variance == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.acf(0.0) == 1.0);
    CHECK(s.acf(2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  }
  SUBCASE("nonstationary input is rejected") {
    CHECK_THROWS_AS(nominal_stats(1.0, 1.0, JumpMeasure(3.0, 1.0), 1.0),
                    NonstationaryError);
  }
}

TEST_CASE("superposed mean, variance, jump rate reproduce the fitted row") {
  const auto prev = nagara_fitted(ModelKind::Previous, 1.0);
  CHECK(superposed_mean(prev) == doctest::Approx(7.287e3).epsilon(3e-3));
  CHECK(superposed_variance(prev) == doctest::Approx(2.136e8).epsilon(3e-3));
  CHECK(superposed_jump_rate(prev) == doctest::Approx(0.2756).epsilon(1e-3));

  // Jump rate is linear in the source rate.
  const auto doubled = ModelParams::make(ModelKind::Previous, 2.0 * prev.b, 1.0,
                                         prev.jump, prev.mixture);
  CHECK(superposed_jump_rate(doubled) ==
        doctest::Approx(2.0 * superposed_jump_rate(prev)).epsilon(1e-14));
  const auto tiny = ModelParams::make(ModelKind::Previous, 1e-30, 1.0,
                                      prev.jump, prev.mixture);
  CHECK(superposed_jump_rate(tiny) < 1e-29);
}

TEST_CASE("mean is shared by all kinds; nondimensional normalization") {
  const JumpMeasure jm(0.5, 1.0);
  const auto mix = ReversionMixture::gamma(3.0, 0.25);
  const double r = mix.inv_speed_mass();
  const auto prev = ModelParams::make(ModelKind::Previous, 2.0, 1.0, jm, mix);
  const auto mf = ModelParams::make(ModelKind::MF, 2.0, 0.3, jm, mix);
  const auto ag = ModelParams::make(ModelKind::AG, 2.0, 0.3, jm, mix);
  CHECK(superposed_mean(prev) == superposed_mean(mf));
  CHECK(superposed_mean(mf) == superposed_mean(ag));

  const auto unit = ModelParams::make(ModelKind::MF, (1.0 - jm.m1()) / r, 0.7,
                                      jm, mix);
  CHECK(superposed_mean(unit) == doctest::Approx(1.0).epsilon(1e-14));

  // Superposing a single point mass recovers the nominal component.
  const auto dirac = ModelParams::make(ModelKind::Previous, 2.0, 1.0, jm,
                                       ReversionMixture::dirac(1.7));
  CHECK(superposed_mean(dirac) ==
        doctest::Approx(nominal_stats(1.7, 2.0, jm, 1.0).mean).epsilon(1e-14));
}

TEST_CASE("variance ordering in w") {
  const JumpMeasure jm(0.5, 1.0);  // M1 = 0.5
  const auto mix = ReversionMixture::gamma(2.5, 1.0);
  const auto prev = ModelParams::make(ModelKind::Previous, 1.0, 1.0, jm, mix);
  const double v_prev = superposed_variance(prev);
  oracle::ParamSampler sampler(31);
  for (int i = 0; i < 20; ++i) {
    const double w = sampler.uniform(0.0, 1.0);
    const auto mf = ModelParams::make(ModelKind::MF, 1.0, w, jm, mix);
    CHECK(superposed_variance(mf) <= v_prev * (1.0 + 1e-14));
  }
  const auto mf1 = ModelParams::make(ModelKind::MF, 1.0, 1.0, jm, mix);
  CHECK(superposed_variance(mf1) == doctest::Approx(v_prev).epsilon(1e-15));
  const auto mf0 = ModelParams::make(ModelKind::MF, 1.0, 0.0, jm, mix);
  CHECK(superposed_variance(mf0) ==
        doctest::Approx(v_prev * (1.0 - jm.m1())).epsilon(1e-14));
}

TEST_CASE("superposed ACF closed form") {
  const JumpMeasure jm(0.5, 1.0);  // M1 = 0.5
  const auto mf =
      ModelParams::make(ModelKind::MF, 1.0, 1.0, jm, ReversionMixture::gamma(2.0, 1.0));
  CHECK(superposed_acf(mf, 0.0) == 1.0);
  CHECK(superposed_acf(mf, 2.0) == doctest::Approx(0.5).epsilon(1e-12));

  // For a Gamma mixture the ACF equals (1 + beta_tilde*tau)^{-(alpha-1)}.
  for (double w : {0.0, 0.4, 1.0}) {
    const auto p = ModelParams::make(ModelKind::MF, 1.0, w, jm,
                                     ReversionMixture::gamma(1.9, 2.3));
    const double bt = 2.3 * (1.0 - w * jm.m1());
    for (double tau : {0.0, 0.5, 1.0, 5.0, 20.0}) {
      CHECK(superposed_acf(p, tau) ==
            doctest::Approx(std::pow(1.0 + bt * tau, -0.9)).epsilon(1e-10));
    }
  }

  // Smaller w means faster decay at every positive lag.
  const auto p0 = ModelParams::make(ModelKind::MF, 1.0, 0.2, jm,
                                    ReversionMixture::gamma(1.9, 2.3));
  const auto p1 = ModelParams::make(ModelKind::MF, 1.0, 0.9, jm,
                                    ReversionMixture::gamma(1.9, 2.3));
  for (double tau : {0.5, 2.0, 10.0}) {
    CHECK(superposed_acf(p0, tau) < superposed_acf(p1, tau));
  }
}

TEST_CASE("AG closed forms are rejected") {
  const auto ag = nagara_fitted(ModelKind::AG, 0.5);
  CHECK_THROWS_AS(superposed_variance(ag), UnsupportedClosedFormError);
  CHECK_THROWS_AS(superposed_acf(ag, 1.0), UnsupportedClosedFormError);
  CHECK_NOTHROW(superposed_mean(ag));
  CHECK_NOTHROW(superposed_jump_rate(ag));
}

TEST_CASE("MF skewness formula") {
  // Fitted Yahagi-2023 row at w = 1; the published theoretical value is 4.994.
  const double b = 5.036e2, lam = 3.020e-4, mu = 1.679e-4;
  const double alpha = 1.132e5, beta = 9.761e-6;
  const double big_r = 1.0 / (beta * (alpha - 1.0));
  CHECK(mf_skewness_formula(b, 1.0, JumpMeasure(mu, lam), big_r) ==
        doctest::Approx(4.994).epsilon(5e-3));

  // Fitted Nagara-2023 row at w = 1, checked against an independent spelled-
  // out evaluation (the published table entry for this row is unreliable).
  {
    const double nb = 2.071e4, nlam = 2.130e-5, nmu = 8.190e-6;
    const double nalpha = 1.438, nbeta = 10.53;
    const double r_ = 1.0 / (nbeta * (nalpha - 1.0));
    const double m1 = nmu / nlam;
    const double m2 = 2.0 * nmu / (nlam * nlam);
    const double m3 = 6.0 * nmu / (nlam * nlam * nlam);
    const double v = m2 * nb * r_ / (2.0 * (1.0 - m1) * (1.0 - m1));
    const double expected = std::pow(v, -1.5) * nb /
                            ((1.0 - m1) * (1.0 - m1)) *
                            (m3 / 3.0 + m2 * m2 / 2.0) * r_;
    CHECK(mf_skewness_formula(nb, 1.0, JumpMeasure(nmu, nlam), r_) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected > 0.0);
  }

  // w = 0 drops the M2^2 term entirely.
  const JumpMeasure jm(0.5, 1.0);
  const double v0 = mf_variance_formula(1.0, 0.0, jm, 2.0);
  const double expected =
      std::pow(v0, -1.5) * 1.0 / (1.0 - jm.m1()) * (jm.moment(3) / 3.0) * 2.0;
  CHECK(mf_skewness_formula(1.0, 0.0, jm, 2.0) ==
        doctest::Approx(expected).epsilon(1e-14));

  const auto mf1 = ModelParams::make(ModelKind::MF, 1.0, 1.0, jm,
                                     ReversionMixture::gamma(2.0, 1.0));
  CHECK(superposed_skewness_mf(mf1) ==
        doctest::Approx(mf_skewness_formula(1.0, 1.0, jm, 1.0)).epsilon(1e-15));
}

TEST_CASE("hurst exponent") {
  CHECK(hurst_exponent(1.438).value() == doctest::Approx(0.781).epsilon(1e-3));
  CHECK(hurst_exponent(1.691).value() == doctest::Approx(0.655).epsilon(1e-3));
  CHECK_FALSE(hurst_exponent(3.0).has_value());
  CHECK_FALSE(hurst_exponent(5.0).has_value());
  CHECK_THROWS_AS(hurst_exponent(1.0), std::domain_error);
  CHECK_THROWS_AS(hurst_exponent(0.5), std::domain_error);
}

TEST_CASE("nondimensionalize") {
  const auto p = nagara_fitted(ModelKind::MF, 1.0);
  const auto nd = nondimensionalize(p);

  CHECK(nd.t_scale == doctest::Approx(0.3523).epsilon(1e-3));
  CHECK(nd.params.b == 1.0);
  CHECK(superposed_mean(nd.params) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nd.params.m1() == doctest::Approx(p.m1()).epsilon(1e-15));
  CHECK(nd.params.w == p.w);
  CHECK(nd.params.mixture.gamma_shape() == p.mixture.gamma_shape());

  // CV and skewness are invariant under the rescaling.
  const double cv_orig = std::sqrt(superposed_variance(p)) / superposed_mean(p);
  const double cv_nd =
      std::sqrt(superposed_variance(nd.params)) / superposed_mean(nd.params);
  CHECK(cv_nd == doctest::Approx(cv_orig).epsilon(1e-10));
  CHECK(superposed_skewness_mf(nd.params) ==
        doctest::Approx(superposed_skewness_mf(p)).epsilon(1e-10));

  const auto dirac = ModelParams::make(ModelKind::Previous, 1.0, 1.0,
                                       JumpMeasure(0.5, 1.0),
                                       ReversionMixture::dirac(2.0));
  CHECK_THROWS_AS(nondimensionalize(dirac), UnsupportedClosedFormError);
}

TEST_CASE("long-memory classification by ACF integral growth") {
  // Numeric integral of the ACF over [0, T] for growing T: unbounded growth
  // for alpha <= 2, convergence for alpha > 2.
  const JumpMeasure jm(0.5, 1.0);
  auto integral_to = [&](const ModelParams& p, double t_end) {
    double total = 0.0;
    double lo = 0.0;
    for (double hi = 1.0; lo < t_end; hi = std::min(hi * 10.0, t_end)) {
      total += oracle::composite_adaptive(
          [&](double tau) { return superposed_acf(p, tau); }, lo, hi, 1e-10, 16);
      lo = hi;
      if (hi >= t_end) break;
    }
    return total;
  };
  for (double alpha : {1.5, 1.8, 2.0}) {
    const auto p = ModelParams::make(ModelKind::MF, 1.0, 1.0, jm,
                                     ReversionMixture::gamma(alpha, 1.0));
    const double i4 = integral_to(p, 1e4);
    const double i6 = integral_to(p, 1e6);
    CHECK(i6 / i4 >= 1.2);
  }
  for (double alpha : {2.5, 4.0}) {
    const auto p = ModelParams::make(ModelKind::MF, 1.0, 1.0, jm,
                                     ReversionMixture::gamma(alpha, 1.0));
    const double i4 = integral_to(p, 1e4);
    const double i6 = integral_to(p, 1e6);
    CHECK(i6 / i4 <= 1.05);
  }
}

TEST_CASE("model params validation") {
  const JumpMeasure jm(0.5, 1.0);
  const auto mix = ReversionMixture::dirac(1.0);
  CHECK_THROWS_AS(ModelParams::make(ModelKind::Previous, 1.0, 0.5, jm, mix),
                  std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::make(ModelKind::MF, -1.0, 0.5, jm, mix),
                  std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::make(ModelKind::MF, 1.0, 1.5, jm, mix),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ModelParams::make(ModelKind::MF, 1.0, 0.5, JumpMeasure(2.0, 1.0), mix),
      NonstationaryError);
}
