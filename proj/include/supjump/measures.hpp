#pragma once

#include <cstddef>
#include <vector>

#include "supjump/errors.hpp"

namespace supjump {

// Exponential-density Levy measure  nu(dz) = mu * lambda * exp(-lambda z) dz.
// mu is the jump frequency per unit intensity, 1/lambda the mean jump size.
// All moments are closed form: M_k = mu * k! / lambda^k.
struct JumpMeasure {
  double mu;
  double lambda;

  JumpMeasure(double mu_, double lambda_);

  double moment(int k) const;
  double m1() const { return mu / lambda; }

  // M1 < 1 is required wherever a stationary model is consumed; the
  // constructor does not forbid larger values (fit results may carry them).
  bool stationary() const { return m1() < 1.0; }

  // Laplace-type transform of the jump part:
  //   integral of (1 - exp(-B z)) nu(dz) = mu * B / (lambda + B),  B >= 0.
  double excitation_transform(double B) const { return mu * B / (lambda + B); }
};

// Finite mixing measure { (r_i, pi_i) } over reversion speeds, shared by the
// Riccati solver and the simulator.
struct RGrid {
  std::vector<double> nodes;    // strictly increasing, positive
  std::vector<double> weights;  // positive, sum to 1 within 1e-12

  std::size_t size() const { return nodes.size(); }

  // R of the grid: sum of pi_i / r_i.
  double inv_speed_mass() const;

  void validate() const;
};

// Probability measure pi over reversion speeds r > 0.  Three families cover
// everything the toolkit consumes: Gamma (polynomial memory), Dirac
// (exponential memory) and an explicit discrete list.
class ReversionMixture {
 public:
  enum class Kind { Gamma, Dirac, Discrete };

  static ReversionMixture gamma(double shape, double scale);
  static ReversionMixture dirac(double r0);
  static ReversionMixture discrete(std::vector<double> nodes,
                                   std::vector<double> weights);

  Kind kind() const { return kind_; }

  double gamma_shape() const { return shape_; }
  double gamma_scale() const { return scale_; }
  double dirac_node() const { return r0_; }
  const std::vector<double>& discrete_nodes() const { return nodes_; }
  const std::vector<double>& discrete_weights() const { return weights_; }

  // R = integral of r^{-1} pi(dr).  Gamma requires shape > 1, otherwise the
  // mass diverges and DivergentMixtureError is thrown.
  double inv_speed_mass() const;

  // Normalised decay kernel (1/R) * integral of r^{-1} exp(-r c tau) pi(dr).
  // Equals 1 at tau = 0 for every mixture; Gamma has the closed form
  // (1 + beta c tau)^{-(shape-1)}.
  double acf_kernel(double c, double tau) const;

  // Equal-probability binning into n bins of mass 1/n.  Each node is the
  // bin's harmonic conditional mean 1/E[1/r | bin], which reproduces the
  // r^{-1} mass per bin exactly -- the functional every downstream consumer
  // (mean, variance, ACF kernel, Riccati/Lyapunov integrals) is built from.
  // Dirac collapses to its single node; Discrete returns itself.
  RGrid discretize(std::size_t n) const;

 private:
  ReversionMixture() = default;

  Kind kind_ = Kind::Dirac;
  double shape_ = 0.0, scale_ = 0.0;  // Gamma
  double r0_ = 0.0;                   // Dirac
  std::vector<double> nodes_, weights_;  // Discrete
};

}  // namespace supjump
