#include "supjump/empirical.hpp"

#include <algorithm>
#include <cmath>

namespace supjump {

namespace {

void check_nonnegative(const CountSeries& s) {
  for (double v : s.values) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("count series '" + s.label +
                                  "' has a negative or non-finite value");
    }
  }
}

}  // namespace

CountSeries trim(const CountSeries& raw) {
  check_nonnegative(raw);
  auto first = std::find_if(raw.values.begin(), raw.values.end(),
                            [](double v) { return v > 0.0; });
  if (first == raw.values.end()) {
    throw Error("trim: series '" + raw.label + "' is all zeros");
  }
  auto last = std::find_if(raw.values.rbegin(), raw.values.rend(),
                           [](double v) { return v > 0.0; })
                  .base();
  return CountSeries{{first, last}, raw.label};
}

SummaryStats summary(const CountSeries& s) {
  check_nonnegative(s);
  const auto& x = s.values;
  const std::size_t n = x.size();
  if (n < 3) {
    throw std::invalid_argument("summary: need at least 3 points, got " +
                                std::to_string(n));
  }

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (!(m2 > 0.0)) {
    throw Error("summary: series '" + s.label +
                "' has zero variance; CV and skewness are undefined");
  }

  // Strict local maxima: interior points strictly above both neighbours,
  // boundary points strictly above their single neighbour.
  std::size_t maxima = 0;
  if (x.front() > x[1]) ++maxima;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (x[i - 1] < x[i] && x[i] > x[i + 1]) ++maxima;
  }
  if (x.back() > x[n - 2]) ++maxima;

  SummaryStats st;
  st.n = n;
  st.ave = mean;
  st.var = m2;
  st.cv = std::sqrt(m2) / mean;
  st.jmp = static_cast<double>(maxima) / static_cast<double>(n);
  st.skw = m3 / std::pow(m2, 1.5);
  return st;
}

std::vector<double> sample_acf(const CountSeries& s, std::size_t max_lag) {
  check_nonnegative(s);
  const auto& x = s.values;
  const std::size_t n = x.size();
  if (max_lag >= n) {
    throw std::invalid_argument("sample_acf: max_lag must be < series length");
  }

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  double denom = 0.0;
  for (double v : x) denom += (v - mean) * (v - mean);
  if (!(denom > 0.0)) {
    throw Error("sample_acf: series '" + s.label + "' has zero variance");
  }

  std::vector<double> rho(max_lag + 1);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double num = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) {
      num += (x[t] - mean) * (x[t + lag] - mean);
    }
    rho[lag] = num / denom;
  }
  return rho;
}

}  // namespace supjump
