#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "errors.hpp"

namespace gaussmart::stats {

/// P[K > lambda] for the limiting Kolmogorov distribution.
inline double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) {
    return 1.0;
  }
  if (lambda < 1.18) {
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
    double sum = 0.0;
    for (int j = 1; j <= 6; ++j) {
      const double odd = 2.0 * j - 1.0;
      sum += std::pow(y, odd * odd);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  const double x = std::exp(-2.0 * lambda * lambda);
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::pow(x, static_cast<double>(j) * j);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-18) {
      break;
    }
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Asymptotic p-value with the Stephens small-sample correction.
inline double ks_p_value(double d, double effective_n) {
  const double rn = std::sqrt(effective_n);
  return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

struct KsResult {
  double statistic;
  double p_value;
};

/// One-sample KS against a continuous CDF.
template <class Cdf>
KsResult ks_one_sample(std::span<const double> samples, Cdf&& cdf) {
  if (samples.empty()) {
    throw domain_error("ks_one_sample: empty sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n)};
}

/// Two-sample KS.
inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw domain_error("ks_two_sample: empty sample");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) {
      ++i;
    }
    while (j < y.size() && y[j] == v) {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return {d, ks_p_value(d, nx * ny / (nx + ny))};
}

struct MeanSe {
  double mean;
  double standard_error;
  double sd;
};

/// Sample mean with its standard error (two-pass).
inline MeanSe mean_se(std::span<const double> v) {
  if (v.size() < 2) {
    throw domain_error("mean_se: need at least two values");
  }
  double m = 0.0;
  for (double x : v) {
    m += x;
  }
  const double n = static_cast<double>(v.size());
  m /= n;
  double ss = 0.0;
  for (double x : v) {
    ss += (x - m) * (x - m);
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  return {m, sd / std::sqrt(n), sd};
}

/// Sample quantile by linear interpolation between order statistics.
inline double quantile(std::span<const double> v, double q) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace gaussmart::stats
