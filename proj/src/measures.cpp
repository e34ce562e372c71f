#include "supjump/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace supjump {

namespace {

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }
double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }

// Quantile of the standard Gamma(a, 1) distribution by bracketing and
// bisection on P(a, .), to 1e-12 in probability.
double gamma_quantile(double a, double q, int bin_index) {
  constexpr double kProbTol = 1e-12;
  double lo = 0.0;
  double hi = a + 10.0 * std::sqrt(a) + 10.0;
  for (int i = 0; i < 200 && gamma_p(a, hi) < q; ++i) hi *= 2.0;
  if (gamma_p(a, hi) < q) {
    throw Error("gamma quantile: failed to bracket bin " +
                std::to_string(bin_index));
  }
  for (int i = 0; i < 500; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double p = gamma_p(a, mid);
    if (std::abs(p - q) <= kProbTol) return mid;
    (p < q ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

JumpMeasure::JumpMeasure(double mu_, double lambda_) : mu(mu_), lambda(lambda_) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("JumpMeasure: mu must be >= 0");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("JumpMeasure: lambda must be > 0");
  }
}

double JumpMeasure::moment(int k) const {
  if (k < 0) throw std::invalid_argument("JumpMeasure::moment: k must be >= 0");
  double m = mu;
  for (int j = 1; j <= k; ++j) m *= static_cast<double>(j) / lambda;
  return m;
}

double RGrid::inv_speed_mass() const {
  double r = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) r += weights[i] / nodes[i];
  return r;
}

void RGrid::validate() const {
  if (nodes.empty() || nodes.size() != weights.size()) {
    throw std::invalid_argument("RGrid: nodes/weights size mismatch");
  }
  double sum = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] > prev)) {
      throw std::invalid_argument("RGrid: nodes must be positive and strictly increasing");
    }
    if (!(weights[i] > 0.0)) {
      throw std::invalid_argument("RGrid: weights must be positive");
    }
    prev = nodes[i];
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("RGrid: weights must sum to 1 within 1e-12");
  }
}

ReversionMixture ReversionMixture::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("ReversionMixture::gamma: shape and scale must be > 0");
  }
  ReversionMixture m;
  m.kind_ = Kind::Gamma;
  m.shape_ = shape;
  m.scale_ = scale;
  return m;
}

ReversionMixture ReversionMixture::dirac(double r0) {
  if (!(r0 > 0.0)) {
    throw std::invalid_argument("ReversionMixture::dirac: r0 must be > 0");
  }
  ReversionMixture m;
  m.kind_ = Kind::Dirac;
  m.r0_ = r0;
  return m;
}

ReversionMixture ReversionMixture::discrete(std::vector<double> nodes,
                                            std::vector<double> weights) {
  RGrid g{std::move(nodes), std::move(weights)};
  g.validate();
  ReversionMixture m;
  m.kind_ = Kind::Discrete;
  m.nodes_ = std::move(g.nodes);
  m.weights_ = std::move(g.weights);
  return m;
}

double ReversionMixture::inv_speed_mass() const {
  switch (kind_) {
    case Kind::Gamma:
      if (shape_ <= 1.0) {
        throw DivergentMixtureError(
            "inv_speed_mass: Gamma mixture needs shape > 1, got " +
            std::to_string(shape_));
      }
      return 1.0 / (scale_ * (shape_ - 1.0));
    case Kind::Dirac:
      return 1.0 / r0_;
    case Kind::Discrete: {
      double r = 0.0;
      for (std::size_t i = 0; i < nodes_.size(); ++i) r += weights_[i] / nodes_[i];
      return r;
    }
  }
  return 0.0;  // unreachable
}

double ReversionMixture::acf_kernel(double c, double tau) const {
  if (!(c > 0.0)) throw std::invalid_argument("acf_kernel: decay c must be > 0");
  if (!(tau >= 0.0)) throw std::invalid_argument("acf_kernel: tau must be >= 0");
  switch (kind_) {
    case Kind::Gamma:
      if (shape_ <= 1.0) {
        throw DivergentMixtureError("acf_kernel: Gamma mixture needs shape > 1");
      }
      return std::pow(1.0 + scale_ * c * tau, -(shape_ - 1.0));
    case Kind::Dirac:
      return std::exp(-r0_ * c * tau);
    case Kind::Discrete: {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double wi = weights_[i] / nodes_[i];
        num += wi * std::exp(-nodes_[i] * c * tau);
        den += wi;
      }
      return num / den;
    }
  }
  return 0.0;  // unreachable
}

RGrid ReversionMixture::discretize(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("discretize: n must be >= 1");
  switch (kind_) {
    case Kind::Dirac:
      return RGrid{{r0_}, {1.0}};
    case Kind::Discrete:
      return RGrid{nodes_, weights_};
    case Kind::Gamma:
      break;
  }

  const double a = shape_;
  if (a <= 1.0) {
    throw DivergentMixtureError("discretize: Gamma mixture needs shape > 1");
  }

  // Bin edges at the k/n quantiles (in Gamma(a,1) units; scale at the end).
  std::vector<double> edges(n + 1);
  edges[0] = 0.0;
  edges[n] = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < n; ++k) {
    edges[k] = gamma_quantile(a, static_cast<double>(k) / static_cast<double>(n),
                              static_cast<int>(k));
  }

  // Per-bin r^{-1} mass: integral of r^{-1} f_a(r) dr over the bin equals
  // [P(a-1, hi) - P(a-1, lo)] / (a-1) in unit-scale coordinates.
  RGrid grid;
  grid.nodes.resize(n);
  grid.weights.assign(n, 1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double mass;
    if (i + 1 == n) {
      mass = gamma_q(a - 1.0, edges[i]) / (a - 1.0);
    } else {
      mass = (gamma_p(a - 1.0, edges[i + 1]) - gamma_p(a - 1.0, edges[i])) /
             (a - 1.0);
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw Error("discretize: degenerate bin " + std::to_string(i));
    }
    grid.nodes[i] = scale_ * grid.weights[i] / mass;
  }
  grid.validate();
  return grid;
}

}  // namespace supjump
