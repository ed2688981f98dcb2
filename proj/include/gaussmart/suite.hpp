#pragma once

// The full set of Monte Carlo checks for one family, at a chosen sample size.
// Each check draws from its own block of stream ids so that adding or
// dropping a check leaves the others unchanged.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "family.hpp"
#include "pathsim.hpp"
#include "verify.hpp"

namespace gaussmart {

struct SuiteConfig {
  std::size_t paths = 200000;
  std::uint64_t seed = 7;
  unsigned threads = 1;
};

namespace detail {
inline std::uint64_t block(std::uint64_t index) { return index << 40; }
}  // namespace detail

inline std::vector<StatReport> run_verification(const SubordinatorFamily& family,
                                                const SuiteConfig& cfg) {
  std::vector<StatReport> out;
  const std::size_t n = std::max<std::size_t>(cfg.paths, 1000);
  auto stamp = [&cfg](StatReport r) {
    r.seed = cfg.seed;
    return r;
  };

  {
    const auto grid = uniform_grid(1.0, 20);
    const auto x1 = sample_marginal(family, grid, n, cfg.seed, cfg.threads, 0);
    auto r = test_gaussian_marginal(x1, 1.0);
    r.config = "t=1 steps=20";
    out.push_back(stamp(r));
  }
  {
    const std::size_t m = std::max<std::size_t>(n, 100000);
    const auto pairs = sample_pairs(family, 0.5, 2.0, m, cfg.seed, cfg.threads, detail::block(1));
    out.push_back(stamp(test_martingale_binned(pairs, 0.5, 2.0)));
    out.push_back(stamp(test_cross_moment(pairs, 0.5, 2.0, family)));
    out.push_back(stamp(test_continuity_bound(pairs, 0.5, 2.0, 2.0)));
  }
  {
    const std::size_t m = std::max<std::size_t>(n, 100000);
    const auto pairs = sample_pairs(family, 1.0, 4.0, m, cfg.seed, cfg.threads, detail::block(2));
    out.push_back(stamp(test_conditional_kurtosis(pairs, 1.0, 4.0, family, cfg.seed)));
  }
  {
    const auto pairs = sample_pairs(family, 1.0, 1.1, n, cfg.seed, cfg.threads, detail::block(3));
    out.push_back(stamp(test_continuity_bound(pairs, 1.0, 1.1, 0.5)));
  }
  {
    const std::size_t m = std::min<std::size_t>(n, 10000);
    const auto grid = uniform_grid(1.0, 256);
    const auto paths = simulate_grid_paths(family, grid, m, cfg.seed, cfg.threads, detail::block(4));
    auto r = test_quadratic_variation(paths, family);
    r.config = "t=1 steps=256";
    out.push_back(stamp(r));
  }
  if (family.kind() == FamilyKind::poisson) {
    {
      const std::size_t m = std::max<std::size_t>(n, 10000);
      const auto jumps = sample_first_jumps(family, 1.0, m, cfg.seed, cfg.threads, detail::block(5));
      out.push_back(stamp(test_jump_times(jumps, 1.0, family)));
    }
    {
      const std::size_t m = std::max<std::size_t>(std::min<std::size_t>(n, 100000), 10000);
      const double grid_times[] = {0.0, 1.0, 2.0};
      const auto grid_values = sample_marginal(family, grid_times, m, cfg.seed, cfg.threads, detail::block(6));
      std::vector<double> event_values(m);
      parallel_for(m, cfg.threads, [&](std::size_t k) {
        RandomStream stream(cfg.seed, detail::block(7) + k);
        const double x0 = sample_gaussian(stream);
        event_values[k] = simulate_event(family, 1.0, x0, 2.0, stream).terminal_value;
      });
      out.push_back(stamp(test_mode_agreement(grid_values, event_values, {1.0, 2.0}, {1.0, 2.0})));
    }
  }
  return out;
}

inline bool all_gated_pass(const std::vector<StatReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const StatReport& r) { return !r.gated || r.passed(); });
}

}  // namespace gaussmart
