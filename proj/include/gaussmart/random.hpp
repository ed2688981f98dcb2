#pragma once

// Counter-based random streams (Philox4x32-10) and the scalar variate
// generators built on them. Every generator here is a pure function of the
// stream state, so a (seed, stream_id) pair reproduces its sequence exactly.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace gaussmart {

namespace detail {

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t m0 = 0xD2511F53u;
  constexpr std::uint32_t m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u;
  constexpr std::uint32_t w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += w0;
    key[1] += w1;
  }
  return ctr;
}

}  // namespace detail

/// Stream ids at or above this value are reserved for verification subsamples;
/// simulated path k uses stream id k.
inline constexpr std::uint64_t verification_stream_base = std::uint64_t{1} << 63;

/// Philox4x32-10 keyed by the 64-bit seed; the 128-bit counter is
/// (stream_id, block index). Single-owner mutable state.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Number of 64-bit words consumed so far.
  std::uint64_t position() const noexcept { return 2 * block_ - (have_ ? 1 : 0); }

  std::uint64_t next_u64() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const auto out = detail::philox4x32_10(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
        {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    ++block_;
    spare_ = (std::uint64_t{out[3]} << 32) | out[2];
    have_ = true;
    return (std::uint64_t{out[1]} << 32) | out[0];
  }

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::uint64_t spare_ = 0;
  bool have_ = false;
};

/// Standard normal deviate by inversion of the normal CDF (one uniform each).
inline double standard_normal(RandomStream& stream) {
  const double u = stream.uniform();
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

/// Poisson(mean): sequential inversion for mean <= 10, PTRS transformed
/// rejection (Hormann 1993) above.
inline std::uint64_t poisson_variate(double mean, RandomStream& stream) {
  if (!(mean > 0.0)) {
    return 0;
  }
  if (mean <= 10.0) {
    const double u = stream.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (p == 0.0 && cdf < u) {
        break;
      }
    }
    return k;
  }
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = stream.uniform() - 0.5;
    const double v = stream.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) {
      return static_cast<std::uint64_t>(k);
    }
    if (k < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - boost::math::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

/// Gamma(shape, rate). Marsaglia-Tsang for shape >= 1; smaller shapes use
/// Gamma(shape) = Gamma(shape + 1) * U^{1/shape}.
inline double gamma_variate(double shape, double rate, RandomStream& stream) {
  if (!(shape > 0.0)) {
    return 0.0;
  }
  if (shape < 1.0) {
    const double boosted = gamma_variate(shape + 1.0, 1.0, stream);
    const double u = stream.uniform();
    return std::exp(std::log(boosted) + std::log(u) / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(stream);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) {
      return d * v / rate;
    }
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v / rate;
    }
  }
}

}  // namespace gaussmart
