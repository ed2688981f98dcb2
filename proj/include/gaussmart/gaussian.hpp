#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace gaussmart {

/// Density of N(mean, variance) at y. Variance must be positive.
inline double normal_pdf(double mean, double variance, double y) {
  const double z = y - mean;
  return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Raw moments E[W^k], k = 0..n, of W ~ N(mean, variance), by the
/// recursion M_k = mean M_{k-1} + (k-1) variance M_{k-2}.
inline std::vector<double> normal_raw_moments(double mean, double variance, int n) {
  std::vector<double> m(static_cast<std::size_t>(n) + 1, 0.0);
  m[0] = 1.0;
  if (n >= 1) {
    m[1] = mean;
  }
  for (int k = 2; k <= n; ++k) {
    m[k] = mean * m[k - 1] + (k - 1) * variance * m[k - 2];
  }
  return m;
}

}  // namespace gaussmart
