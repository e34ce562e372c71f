#pragma once

#include <stdexcept>
#include <string>

namespace supjump {

// Base class for all toolkit errors so callers can catch one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A mixing measure whose r^{-1} mass diverges (Gamma with shape <= 1).
class DivergentMixtureError : public Error {
 public:
  using Error::Error;
};

// Jump moments violate the stationarity requirement M1 < 1.
class NonstationaryError : public Error {
 public:
  using Error::Error;
};

// A quantity has no closed form for the requested model kind.
class UnsupportedClosedFormError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside an ODE solve (bound violation, NaN, route
// disagreement beyond tolerance).
class SolverError : public Error {
 public:
  using Error::Error;
};

// Optimizer could not converge from any start.
class FitFailure : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration (bad horizon/lag combination, malformed input,
// missing file, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace supjump
