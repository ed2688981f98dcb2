#pragma once

// Statistical checks of the closed-form laws of the process. Each check takes
// simulated data and returns a self-describing StatReport. Gates: KS p-value
// above 0.001, moment z-scores below 4 in absolute value.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "family.hpp"
#include "gaussian.hpp"
#include "pathsim.hpp"
#include "random.hpp"
#include "stats.hpp"

namespace gaussmart {

inline constexpr double ks_p_floor = 1e-3;
inline constexpr double z_bound = 4.0;

enum class Outcome { pass, fail, inconclusive };

inline std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::pass:
      return "pass";
    case Outcome::fail:
      return "fail";
    case Outcome::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

struct Metric {
  std::string name;
  double value;
};

struct StatReport {
  std::string test_name;
  std::size_t n_samples = 0;
  double statistic = std::numeric_limits<double>::quiet_NaN();
  double reference = std::numeric_limits<double>::quiet_NaN();
  std::string reference_tag;
  double p_value = std::numeric_limits<double>::quiet_NaN();
  double p_floor = std::numeric_limits<double>::quiet_NaN();
  // Half-width of the acceptance band around `reference`, when the gate is a band.
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  Outcome outcome = Outcome::inconclusive;
  bool gated = true;
  std::uint64_t seed = 0;
  std::string config;
  std::vector<Metric> metrics;
  std::string message;

  bool passed() const noexcept { return outcome == Outcome::pass; }

  double metric(const std::string& name) const {
    for (const auto& m : metrics) {
      if (m.name == name) {
        return m.value;
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

struct SamplePair {
  double early;  // X_s
  double late;   // X_t
};

// ---------------------------------------------------------------------------
// Sample generation

/// n independent (X_s, X_t) pairs: X_s exact N(0, s), then one transition.
inline std::vector<SamplePair> sample_pairs(const SubordinatorFamily& family, double s, double t,
                                            std::size_t n, std::uint64_t seed, unsigned threads = 1,
                                            std::uint64_t first_stream = 0) {
  if (!(s > 0.0) || !(t > s)) {
    throw domain_error("sample_pairs: need 0 < s < t");
  }
  std::vector<SamplePair> out(n);
  parallel_for(n, threads, [&](std::size_t k) {
    RandomStream stream(seed, first_stream + k);
    const double xs = transition_step(family, 0.0, s, 0.0, stream);
    out[k] = {xs, transition_step(family, s, t, xs, stream)};
  });
  return out;
}

/// Terminal values of `simulate_grid_paths`.
inline std::vector<double> sample_marginal(const SubordinatorFamily& family,
                                           std::span<const double> times, std::size_t n,
                                           std::uint64_t seed, unsigned threads = 1,
                                           std::uint64_t first_stream = 0) {
  validate_grid(times);
  std::vector<double> out(n);
  parallel_for(n, threads, [&](std::size_t k) {
    RandomStream stream(seed, first_stream + k);
    out[k] = simulate_grid(family, times, stream).values.back();
  });
  return out;
}

/// First jump times after s (Poisson kind), one stream per draw.
inline std::vector<double> sample_first_jumps(const SubordinatorFamily& family, double s,
                                              std::size_t n, std::uint64_t seed,
                                              unsigned threads = 1, std::uint64_t first_stream = 0) {
  if (family.kind() != FamilyKind::poisson) {
    throw unsupported_family("first jump times need the poisson kind");
  }
  std::vector<double> out(n);
  parallel_for(n, threads, [&](std::size_t k) {
    RandomStream stream(seed, first_stream + k);
    out[k] = sample_first_jump_time(family, s, stream);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Checks

namespace detail {

inline double z_score(double estimate, double target, double se) {
  if (se > 0.0) {
    return (estimate - target) / se;
  }
  return estimate == target ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), estimate - target);
}

}  // namespace detail

/// KS against N(0, t) plus z-scores of the raw moments 1..4 (targets 0, t, 0, 3t^2).
inline StatReport test_gaussian_marginal(std::span<const double> samples, double t) {
  if (!(t > 0.0)) {
    throw domain_error("test_gaussian_marginal: t must be positive");
  }
  if (samples.size() < 1000) {
    throw domain_error("test_gaussian_marginal: need at least 1000 samples");
  }
  StatReport r;
  r.test_name = "gaussian_marginal";
  r.n_samples = samples.size();
  r.reference_tag = "N(0," + std::to_string(t) + ")";
  r.p_floor = ks_p_floor;
  const auto base = stats::mean_se(samples);
  if (!(base.sd > 0.0)) {
    r.outcome = Outcome::fail;
    r.message = "degenerate sample: zero variance";
    return r;
  }
  const double sd = std::sqrt(t);
  const auto ks = stats::ks_one_sample(samples, [sd](double x) { return normal_cdf(x / sd); });
  r.statistic = ks.statistic;
  r.p_value = ks.p_value;
  const double targets[4] = {0.0, t, 0.0, 3.0 * t * t};
  bool moments_ok = true;
  std::vector<double> powers(samples.size());
  for (int k = 1; k <= 4; ++k) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      powers[i] = std::pow(samples[i], k);
    }
    const auto m = stats::mean_se(powers);
    const double z = detail::z_score(m.mean, targets[k - 1], m.standard_error);
    r.metrics.push_back({"moment" + std::to_string(k), m.mean});
    r.metrics.push_back({"z" + std::to_string(k), z});
    moments_ok = moments_ok && std::abs(z) < z_bound;
  }
  r.reference = t;
  r.metrics.push_back({"variance", base.sd * base.sd});
  r.outcome = (ks.p_value > ks_p_floor && moments_ok) ? Outcome::pass : Outcome::fail;
  if (!moments_ok) {
    r.message = "moment z-score beyond 4";
  }
  return r;
}

/// Deciles of X_s; in each, the mean of X_t - X_s must be within 4 SE of 0.
inline StatReport test_martingale_binned(std::span<const SamplePair> pairs, double s, double t) {
  StatReport r;
  r.test_name = "martingale_binned";
  r.n_samples = pairs.size();
  r.reference = 0.0;
  r.reference_tag = "E[X_t - X_s | X_s] = 0";
  r.tolerance = z_bound;
  r.config = "s=" + std::to_string(s) + " t=" + std::to_string(t);
  constexpr std::size_t bins = 10;
  if (pairs.size() < 20 * bins) {
    r.outcome = Outcome::inconclusive;
    r.message = "fewer than 20 pairs per bin";
    return r;
  }
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&pairs](std::size_t l, std::size_t rr) { return pairs[l].early < pairs[rr].early; });
  double worst = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = b * pairs.size() / bins;
    const std::size_t hi = (b + 1) * pairs.size() / bins;
    std::vector<double> inc;
    inc.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      inc.push_back(pairs[order[i]].late - pairs[order[i]].early);
    }
    const auto m = stats::mean_se(inc);
    const double z = detail::z_score(m.mean, 0.0, m.standard_error);
    r.metrics.push_back({"bin" + std::to_string(b) + "_mean", m.mean});
    r.metrics.push_back({"bin" + std::to_string(b) + "_z", z});
    worst = std::max(worst, std::abs(z));
  }
  r.statistic = worst;
  r.outcome = worst < z_bound ? Outcome::pass : Outcome::fail;
  return r;
}

/// E[X_s^2 X_t^2] = s t + 2 s^{1+d} t^{1-d}; for d < 1 it must also sit at least
/// 4 SE above the bivariate Gaussian value s t + 2 s^2.
inline StatReport test_cross_moment(std::span<const SamplePair> pairs, double s, double t,
                                    const SubordinatorFamily& family) {
  if (pairs.size() < 100000) {
    throw domain_error("test_cross_moment: need at least 1e5 pairs");
  }
  const double d = delta(family);
  StatReport r;
  r.test_name = "cross_moment";
  r.n_samples = pairs.size();
  r.reference = s * t + 2.0 * std::pow(s, 1.0 + d) * std::pow(t, 1.0 - d);
  r.reference_tag = "s t + 2 s^(1+delta) t^(1-delta)";
  r.config = "s=" + std::to_string(s) + " t=" + std::to_string(t);
  std::vector<double> prod(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    prod[i] = pairs[i].early * pairs[i].early * pairs[i].late * pairs[i].late;
  }
  const auto m = stats::mean_se(prod);
  const double gaussian_value = s * t + 2.0 * s * s;
  const double z = detail::z_score(m.mean, r.reference, m.standard_error);
  const double z_gauss = detail::z_score(m.mean, gaussian_value, m.standard_error);
  r.statistic = m.mean;
  r.tolerance = z_bound * m.standard_error;
  r.metrics = {{"standard_error", m.standard_error},
               {"z_target", z},
               {"gaussian_value", gaussian_value},
               {"z_above_gaussian", z_gauss},
               {"delta", d}};
  const bool on_target = std::abs(z) < z_bound;
  const bool non_gaussian = family.degenerate() || d >= 1.0 || s == t || z_gauss >= z_bound;
  r.outcome = (on_target && non_gaussian) ? Outcome::pass : Outcome::fail;
  if (!non_gaussian) {
    r.message = "not separated from the bivariate Gaussian value";
  }
  return r;
}

/// 3 E[(1-R)^2] / E[1-R]^2 with E[1-R] = 1 - sigma^{-psi(1)},
/// E[(1-R)^2] = 1 - 2 sigma^{-psi(1)} + sigma^{-psi(2)}.
inline double conditional_kurtosis_target(const SubordinatorFamily& family, double sigma) {
  const double l1 = laplace(family, sigma, 1.0);
  const double l2 = laplace(family, sigma, 2.0);
  const double first = 1.0 - l1;
  return 3.0 * (1.0 - 2.0 * l1 + l2) / (first * first);
}

/// Kurtosis of X_t given |X_s| < 0.05 sqrt(s), against the closed form; bootstrap SE.
inline StatReport test_conditional_kurtosis(std::span<const SamplePair> pairs, double s, double t,
                                            const SubordinatorFamily& family,
                                            std::uint64_t bootstrap_seed = 0,
                                            std::size_t bootstrap_rounds = 200) {
  StatReport r;
  r.test_name = "conditional_kurtosis";
  r.seed = bootstrap_seed;
  r.config = "s=" + std::to_string(s) + " t=" + std::to_string(t);
  r.reference = conditional_kurtosis_target(family, std::sqrt(t / s));
  r.reference_tag = "3 E[(1-R)^2] / E[1-R]^2";
  const double half_bin = 0.05 * std::sqrt(s);
  std::vector<double> central;
  for (const auto& p : pairs) {
    if (std::abs(p.early) < half_bin) {
      central.push_back(p.late);
    }
  }
  r.n_samples = central.size();
  if (central.size() < 1000) {
    r.outcome = Outcome::inconclusive;
    r.message = "fewer than 1000 pairs in the central bin";
    return r;
  }
  auto kurtosis = [](const std::vector<double>& v) {
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : v) {
      const double x2 = x * x;
      m2 += x2;
      m4 += x2 * x2;
    }
    m2 /= static_cast<double>(v.size());
    m4 /= static_cast<double>(v.size());
    return m4 / (m2 * m2);
  };
  r.statistic = kurtosis(central);
  RandomStream stream(bootstrap_seed, verification_stream_base + 1);
  std::vector<double> resample(central.size());
  std::vector<double> boot(bootstrap_rounds);
  for (std::size_t b = 0; b < bootstrap_rounds; ++b) {
    for (auto& v : resample) {
      const auto idx = static_cast<std::size_t>(stream.uniform() * static_cast<double>(central.size()));
      v = central[std::min(idx, central.size() - 1)];
    }
    boot[b] = kurtosis(resample);
  }
  const double se = stats::mean_se(boot).sd;
  r.tolerance = z_bound * se;
  r.metrics = {{"bootstrap_se", se}, {"z", detail::z_score(r.statistic, r.reference, se)}};
  r.outcome = std::abs(r.statistic - r.reference) < r.tolerance ? Outcome::pass : Outcome::fail;
  return r;
}

namespace detail {

// Sum of conditional second moments minus the compensator, per path, using
// the grid points at indices 0, stride, 2 stride, ...
inline std::pair<double, double> qv_sides(const PathGrid& p, double d, std::size_t stride) {
  const auto& t = p.times;
  const auto& x = p.values;
  const std::size_t n = t.size() - 1;
  double lhs = t[stride];  // E[X_{t_1}^2 | X_0 = 0]
  // [0, t_1] contribution of int X^2/u du is estimated by X_{t_1}^2 (equal in mean).
  double integral = x[stride] * x[stride];
  for (std::size_t k = stride; k + stride <= n; k += stride) {
    const double s = t[k];
    const double u = t[k + stride];
    const double growth = std::pow(u / s, 1.0 - d);
    lhs += u - growth * s + (growth - 1.0) * x[k] * x[k];
    integral += 0.5 * (u - s) * (x[k] * x[k] / s + x[k + stride] * x[k + stride] / u);
  }
  const double horizon = t[n - (n % stride)];
  const double rhs = d * horizon + (1.0 - d) * integral;
  return {lhs, rhs};
}

}  // namespace detail

/// Sum over the grid of E[(dX)^2 | X] (conditional second-moment formula) against
/// delta t + (1 - delta) int_0^t X^2/s ds (trapezoid from the first positive time;
/// X_{t_1}^2 stands in for the first interval). Gates: mean residual within 4 SE
/// of 0, residual RMS shrinks from the every-other-point grid to the full grid,
/// and the mean compensator is within 4 SE of t.
inline StatReport test_quadratic_variation(std::span<const PathGrid> paths,
                                           const SubordinatorFamily& family) {
  StatReport r;
  r.test_name = "quadratic_variation";
  r.n_samples = paths.size();
  r.reference = 0.0;
  r.reference_tag = "sum E[(dX)^2|X] - <X,X>_t";
  if (paths.size() < 2) {
    throw domain_error("test_quadratic_variation: need at least two paths");
  }
  const std::size_t steps = paths[0].times.size() - 1;
  for (const auto& p : paths) {
    if (p.times != paths[0].times || p.values.size() != p.times.size()) {
      throw domain_error("test_quadratic_variation: paths must share one grid");
    }
  }
  if (steps < 64) {
    r.outcome = Outcome::inconclusive;
    r.message = "grid has fewer than 64 steps";
    return r;
  }
  const double d = delta(family);
  const double horizon = paths[0].times.back();
  std::vector<double> fine(paths.size());
  std::vector<double> coarse(paths.size());
  std::vector<double> compensator(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto [lhs, rhs] = detail::qv_sides(paths[i], d, 1);
    fine[i] = lhs - rhs;
    compensator[i] = rhs;
    const auto [lc, rc] = detail::qv_sides(paths[i], d, 2);
    coarse[i] = lc - rc;
  }
  auto rms = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
      s += x * x;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
  };
  const auto res = stats::mean_se(fine);
  const auto comp = stats::mean_se(compensator);
  const double slack = 1e-12 * horizon;
  const double rms_fine = rms(fine);
  const double rms_coarse = rms(coarse);
  const bool residual_ok = std::abs(res.mean) <= z_bound * res.standard_error + slack;
  const bool refinement_ok = rms_fine <= rms_coarse + slack;
  const bool mean_ok = std::abs(comp.mean - horizon) <= z_bound * comp.standard_error + slack;
  r.statistic = res.mean;
  r.tolerance = z_bound * res.standard_error;
  r.metrics = {{"residual_se", res.standard_error},
               {"residual_rms", rms_fine},
               {"residual_rms_coarse", rms_coarse},
               {"compensator_mean", comp.mean},
               {"compensator_se", comp.standard_error},
               {"horizon", horizon},
               {"steps", static_cast<double>(steps)}};
  r.outcome = (residual_ok && refinement_ok && mean_ok) ? Outcome::pass : Outcome::fail;
  if (!residual_ok) {
    r.message = "mean residual beyond 4 SE";
  } else if (!refinement_ok) {
    r.message = "residual does not shrink under refinement";
  } else if (!mean_ok) {
    r.message = "mean compensator beyond 4 SE of t";
  }
  return r;
}

/// First jump times after s against the Pareto law P[T > t] = (s/t)^{c/2}:
/// KS, survival at 2s, median s 2^{2/c} within 1%, support. The sample mean is
/// reported only (infinite second moment).
inline StatReport test_jump_times(std::span<const double> first_jumps, double s,
                                  const SubordinatorFamily& family) {
  if (family.kind() != FamilyKind::poisson) {
    throw unsupported_family("test_jump_times: needs the poisson kind");
  }
  if (!(s > 0.0)) {
    throw domain_error("test_jump_times: s must be positive");
  }
  if (first_jumps.size() < 10000) {
    throw domain_error("test_jump_times: need at least 1e4 samples");
  }
  const double c = family.c();
  StatReport r;
  r.test_name = "jump_times";
  r.n_samples = first_jumps.size();
  r.reference_tag = "Pareto(scale s, index c/2)";
  r.p_floor = ks_p_floor;
  r.config = "s=" + std::to_string(s);
  const auto ks = stats::ks_one_sample(first_jumps, [s, c](double t) {
    return t <= s ? 0.0 : -std::expm1(0.5 * c * std::log(s / t));
  });
  r.statistic = ks.statistic;
  r.p_value = ks.p_value;

  const double n = static_cast<double>(first_jumps.size());
  double beyond = 0.0;
  bool support_ok = true;
  double sum = 0.0;
  for (double t : first_jumps) {
    beyond += t > 2.0 * s ? 1.0 : 0.0;
    support_ok = support_ok && t > s;
    sum += t;
  }
  const double survival = beyond / n;
  const double survival_target = std::pow(2.0, -0.5 * c);
  const double survival_se = std::sqrt(survival_target * (1.0 - survival_target) / n);
  const double median = stats::quantile(first_jumps, 0.5);
  const double median_target = s * std::pow(2.0, 2.0 / c);
  const double median_rel = std::abs(median - median_target) / median_target;
  r.reference = median_target;
  r.metrics = {{"survival_2s", survival},
               {"survival_target", survival_target},
               {"survival_z", detail::z_score(survival, survival_target, survival_se)},
               {"median", median},
               {"median_target", median_target},
               {"median_relative_error", median_rel},
               {"sample_mean", sum / n},
               {"mean_target", c > 2.0 ? c * s / (c - 2.0) : std::numeric_limits<double>::infinity()}};
  const bool survival_ok = std::abs(survival - survival_target) < z_bound * survival_se;
  const bool ok = ks.p_value > ks_p_floor && survival_ok && median_rel < 0.01 && support_ok;
  r.outcome = ok ? Outcome::pass : Outcome::fail;
  if (!support_ok) {
    r.message = "first jump time not after s";
  }
  return r;
}

struct SampleMeta {
  double start;
  double horizon;
};

/// Two-sample KS between grid-mode and event-mode values at a common (start, horizon).
inline StatReport test_mode_agreement(std::span<const double> grid_samples,
                                      std::span<const double> event_samples,
                                      const SampleMeta& grid_meta, const SampleMeta& event_meta) {
  if (grid_meta.start != event_meta.start || grid_meta.horizon != event_meta.horizon) {
    throw domain_error("test_mode_agreement: samples describe different (start, horizon)");
  }
  if (grid_samples.size() < 10000 || event_samples.size() < 10000) {
    throw domain_error("test_mode_agreement: need at least 1e4 samples per mode");
  }
  StatReport r;
  r.test_name = "mode_agreement";
  r.n_samples = grid_samples.size() + event_samples.size();
  r.reference_tag = "two-sample KS";
  r.p_floor = ks_p_floor;
  r.config = "start=" + std::to_string(grid_meta.start) + " horizon=" + std::to_string(grid_meta.horizon);
  const auto ks = stats::ks_two_sample(grid_samples, event_samples);
  r.statistic = ks.statistic;
  r.p_value = ks.p_value;
  r.outcome = ks.p_value > ks_p_floor ? Outcome::pass : Outcome::fail;
  return r;
}

/// P[|X_t - X_s| > c] <= (t - s) / c^2 up to 4 binomial SE.
inline StatReport test_continuity_bound(std::span<const SamplePair> pairs, double s, double t,
                                        double c) {
  if (pairs.empty() || !(c > 0.0)) {
    throw domain_error("test_continuity_bound: need samples and c > 0");
  }
  StatReport r;
  r.test_name = "continuity_bound";
  r.n_samples = pairs.size();
  r.reference = (t - s) / (c * c);
  r.reference_tag = "(t - s) / c^2";
  r.config = "s=" + std::to_string(s) + " t=" + std::to_string(t) + " c=" + std::to_string(c);
  double hits = 0.0;
  for (const auto& p : pairs) {
    hits += std::abs(p.late - p.early) > c ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(pairs.size());
  const double prob = hits / n;
  const double se = std::sqrt(std::max(prob * (1.0 - prob), 1.0 / n) / n);
  r.statistic = prob;
  r.tolerance = z_bound * se;
  r.outcome = prob <= r.reference + r.tolerance ? Outcome::pass : Outcome::fail;
  return r;
}

}  // namespace gaussmart
