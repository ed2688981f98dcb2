#pragma once

// Trajectories of the Gaussian-marginal martingale X.
//
// Grid mode applies the almost-sure transition
//   X_t = sqrt(t/s) (sqrt(R) X_s + sqrt(s) sqrt(1 - R) xi),  R = exp(-U_{sqrt(t/s)}),
// after an exact N(0, t_1) first step from X_0 = 0.
//
// Event mode is exact for the Poisson kind: between jumps x(u) = x(s) sqrt(u/s);
// the first jump after s has survival (s/t)^{c/2}; a jump at time T from x adds
// N((e^{-1/2} - 1) x, T (1 - e^{-1})).

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "family.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "sampler.hpp"

namespace gaussmart {

struct PathGrid {
  std::vector<double> times;
  std::vector<double> values;
};

struct Jump {
  double time;
  double pre_value;
  double post_value;
};

struct EventPath {
  double start_time = 0.0;
  double start_value = 0.0;
  double horizon = 0.0;
  std::vector<Jump> jumps;
  double terminal_value = 0.0;

  /// Value at time u in [start_time, horizon] (right-continuous).
  double value_at(double u) const {
    double anchor_time = start_time;
    double anchor_value = start_value;
    for (const auto& j : jumps) {
      if (j.time > u) {
        break;
      }
      anchor_time = j.time;
      anchor_value = j.post_value;
    }
    return anchor_value * std::sqrt(u / anchor_time);
  }
};

inline void validate_grid(std::span<const double> times) {
  if (times.size() < 2) {
    throw domain_error("time grid needs at least two points");
  }
  if (times[0] != 0.0) {
    throw domain_error("time grid must start at 0");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1]) || !std::isfinite(times[k])) {
      throw domain_error("time grid must be strictly increasing and finite");
    }
  }
}

/// Uniform grid 0 = t_0 < ... < t_steps = end.
inline std::vector<double> uniform_grid(double end, std::size_t steps) {
  if (!(end > 0.0) || steps == 0) {
    throw domain_error("uniform_grid: need end > 0 and at least one step");
  }
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    t[k] = end * static_cast<double>(k) / static_cast<double>(steps);
  }
  t[steps] = end;
  return t;
}

/// One transition X_s = x -> X_t. At s = 0 the kernel is N(x, t).
inline double transition_step(const SubordinatorFamily& family, double s, double t, double x,
                              RandomStream& stream) {
  if (!(s >= 0.0) || !(t > s)) {
    throw domain_error("transition_step: need 0 <= s < t");
  }
  if (s == 0.0) {
    return x + std::sqrt(t) * sample_gaussian(stream);
  }
  const double sigma = std::sqrt(t / s);
  const double u = sample_subordinator_increment(family, sigma, stream);
  const double xi = sample_gaussian(stream);
  const double sqrt_r = std::exp(-0.5 * u);
  const double sqrt_one_minus_r = std::sqrt(-std::expm1(-u));
  return sigma * (sqrt_r * x + std::sqrt(s) * sqrt_one_minus_r * xi);
}

inline PathGrid simulate_grid(const SubordinatorFamily& family, std::span<const double> times,
                              RandomStream& stream) {
  validate_grid(times);
  detail::require_calibrated(family, "simulate_grid");
  PathGrid path;
  path.times.assign(times.begin(), times.end());
  path.values.resize(times.size());
  path.values[0] = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    path.values[k] = transition_step(family, times[k - 1], times[k], path.values[k - 1], stream);
  }
  return path;
}

/// Path k uses stream (seed, first_stream + k).
inline std::vector<PathGrid> simulate_grid_paths(const SubordinatorFamily& family,
                                                 std::span<const double> times, std::size_t n_paths,
                                                 std::uint64_t seed, unsigned threads = 1,
                                                 std::uint64_t first_stream = 0) {
  validate_grid(times);
  std::vector<PathGrid> paths(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t k) {
    RandomStream stream(seed, first_stream + k);
    paths[k] = simulate_grid(family, times, stream);
  });
  return paths;
}

/// Which time scales the Gaussian innovation at a jump. Only `jump_time` is
/// the process; `segment_start` exists to check that the verification
/// harness rejects a mis-specified simulator.
enum class JumpVarianceClock { jump_time, segment_start };

/// First jump after s for the Poisson kind: s * u^{-2/c}, u uniform on (0, 1).
inline double sample_first_jump_time(const SubordinatorFamily& family, double s,
                                     RandomStream& stream) {
  const double u = stream.uniform();
  return s * std::exp(-2.0 * std::log(u) / family.c());
}

inline EventPath simulate_event(const SubordinatorFamily& family, double s0, double x0,
                                double horizon, RandomStream& stream,
                                JumpVarianceClock clock = JumpVarianceClock::jump_time) {
  if (family.kind() != FamilyKind::poisson) {
    throw unsupported_family("simulate_event: exact event simulation needs the poisson kind");
  }
  detail::require_calibrated(family, "simulate_event");
  if (!(s0 > 0.0)) {
    throw domain_error("simulate_event: start time must be positive");
  }
  if (!(horizon > s0)) {
    throw domain_error("simulate_event: horizon must exceed start time");
  }
  const double jump_scale = std::exp(-0.5) - 1.0;
  const double jump_variance = -std::expm1(-1.0);
  EventPath path;
  path.start_time = s0;
  path.start_value = x0;
  path.horizon = horizon;
  double s = s0;
  double x = x0;
  for (;;) {
    const double next = sample_first_jump_time(family, s, stream);
    if (next > horizon) {
      break;
    }
    const double pre = x * std::sqrt(next / s);
    const double clock_time = clock == JumpVarianceClock::jump_time ? next : s;
    const double z = jump_scale * pre + std::sqrt(clock_time * jump_variance) * sample_gaussian(stream);
    path.jumps.push_back({next, pre, pre + z});
    s = next;
    x = pre + z;
  }
  path.terminal_value = x * std::sqrt(horizon / s);
  return path;
}

struct ConditionalMoments {
  double mean;
  double second_moment;
};

/// E[X_t | X_s = x] and E[X_t^2 | X_s = x] = t - t^{1-d} s^d + t^{1-d} s^{d-1} x^2, d = psi(1)/2.
inline ConditionalMoments conditional_moments(const SubordinatorFamily& family, double s, double t,
                                              double x) {
  if (!(s > 0.0) || !(t >= s)) {
    throw domain_error("conditional_moments: need 0 < s <= t");
  }
  const double d = delta(family);
  const double growth = std::pow(t / s, 1.0 - d);  // t^{1-d} s^{d-1}
  return {x, t - growth * s + growth * x * x};
}

}  // namespace gaussmart
