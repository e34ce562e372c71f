#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "supjump/errors.hpp"

namespace supjump {

// Daily count series (nonnegative, one value per day).
struct CountSeries {
  std::vector<double> values;
  std::string label;
};

// Five summary statistics of a count series, in the conventional column
// order Ave, Var, CV, Jmp, Skw.  Moments use the population convention
// (divisor I); Jmp counts interior and boundary strict local maxima per day.
struct SummaryStats {
  double ave = 0.0;
  double var = 0.0;
  double cv = 0.0;
  double jmp = 0.0;
  double skw = 0.0;
  std::size_t n = 0;
};

// Drop the maximal leading and trailing runs of zeros; interior zeros stay.
CountSeries trim(const CountSeries& raw);

SummaryStats summary(const CountSeries& s);

// Biased sample autocorrelation rho(0..max_lag); rho(0) = 1.  The biased
// estimator keeps the sequence positive semidefinite.  Lags above I/2 are
// legal but increasingly unreliable.
std::vector<double> sample_acf(const CountSeries& s, std::size_t max_lag);

}  // namespace supjump
