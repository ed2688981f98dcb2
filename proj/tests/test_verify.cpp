#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "gaussmart/suite.hpp"

using namespace gaussmart;

namespace {

SubordinatorFamily poisson_family() { return calibrate(SubordinatorFamily::poisson(1.0)); }
SubordinatorFamily gamma_family() { return calibrate(SubordinatorFamily::gamma(1.0, 1.0)); }

std::vector<double> normals(std::size_t n, double mean, double sd, std::uint64_t seed) {
  RandomStream s(seed, 0);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = mean + sd * standard_normal(s);
  }
  return v;
}

// Brownian pairs: X_s ~ N(0, s), X_t = X_s + N(0, t - s), optionally scaled.
std::vector<SamplePair> brownian_pairs(double s, double t, std::size_t n, std::uint64_t seed,
                                       double late_factor = 1.0) {
  RandomStream st(seed, 0);
  std::vector<SamplePair> out(n);
  for (auto& p : out) {
    const double xs = std::sqrt(s) * standard_normal(st);
    p = {xs, late_factor * xs + std::sqrt(t - s) * standard_normal(st)};
  }
  return out;
}

std::vector<double> pareto(double s, double c, std::size_t n, std::uint64_t seed) {
  RandomStream st(seed, 0);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = s * std::pow(st.uniform(), -2.0 / c);
  }
  return v;
}

}  // namespace

TEST(Verify, GaussianMarginalAcceptsAndRejects) {
  EXPECT_TRUE(test_gaussian_marginal(normals(20000, 0.0, 1.0, 1), 1.0).passed());
  EXPECT_TRUE(test_gaussian_marginal(normals(20000, 0.0, std::sqrt(2.5), 1), 2.5).passed());
  EXPECT_FALSE(test_gaussian_marginal(normals(20000, 0.2, 1.0, 1), 1.0).passed());
  EXPECT_FALSE(test_gaussian_marginal(normals(20000, 0.0, 1.1, 1), 1.0).passed());
  EXPECT_FALSE(test_gaussian_marginal(std::vector<double>(2000, 0.0), 1.0).passed());
  EXPECT_THROW(test_gaussian_marginal(normals(999, 0.0, 1.0, 1), 1.0), domain_error);
}

TEST(Verify, MartingaleBinnedAcceptsAndRejects) {
  EXPECT_TRUE(test_martingale_binned(brownian_pairs(0.5, 2.0, 100000, 2), 0.5, 2.0).passed());
  const auto model = sample_pairs(gamma_family(), 0.5, 2.0, 100000, 3);
  EXPECT_TRUE(test_martingale_binned(model, 0.5, 2.0).passed());
  EXPECT_FALSE(test_martingale_binned(brownian_pairs(0.5, 2.0, 100000, 2, 1.05), 0.5, 2.0).passed());
  const auto few = brownian_pairs(0.5, 2.0, 50, 2);
  EXPECT_EQ(test_martingale_binned(few, 0.5, 2.0).outcome, Outcome::inconclusive);
}

TEST(Verify, CrossMomentSeparatesFromGaussian) {
  const auto f = poisson_family();
  const auto model = sample_pairs(f, 0.5, 2.0, 1000000, 4);
  const auto r = test_cross_moment(model, 0.5, 2.0, f);
  EXPECT_TRUE(r.passed()) << r.statistic << " vs " << r.reference;
  EXPECT_NEAR(r.reference, 1.656774190986868, 1e-12);
  EXPECT_GE(r.metric("z_above_gaussian"), 4.0);
  // Bivariate Gaussian pairs sit at s t + 2 s^2 = 1.5.
  EXPECT_FALSE(test_cross_moment(brownian_pairs(0.5, 2.0, 1000000, 5), 0.5, 2.0, f).passed());
  EXPECT_THROW(test_cross_moment(brownian_pairs(0.5, 2.0, 1000, 5), 0.5, 2.0, f), domain_error);
}

TEST(Verify, ConditionalKurtosis) {
  const auto f = poisson_family();
  EXPECT_NEAR(conditional_kurtosis_target(f, 2.0), 3.732740559470328, 1e-12);
  const auto model = sample_pairs(f, 1.0, 4.0, 200000, 6);
  EXPECT_TRUE(test_conditional_kurtosis(model, 1.0, 4.0, f, 1).passed());
  EXPECT_FALSE(test_conditional_kurtosis(brownian_pairs(1.0, 4.0, 200000, 7), 1.0, 4.0, f, 1).passed());
  EXPECT_EQ(test_conditional_kurtosis(brownian_pairs(1.0, 4.0, 5000, 7), 1.0, 4.0, f, 1).outcome,
            Outcome::inconclusive);
}

TEST(Verify, QuadraticVariation) {
  const auto f = poisson_family();
  const auto grid = uniform_grid(1.0, 256);
  auto paths = simulate_grid_paths(f, grid, 10000, 8);
  const auto r = test_quadratic_variation(paths, f);
  EXPECT_TRUE(r.passed()) << r.message;
  EXPECT_NEAR(r.metric("compensator_mean"), 1.0, 4.0 * r.metric("compensator_se"));
  // Inflating every path by 10% breaks both sides of the identity.
  for (auto& p : paths) {
    for (auto& v : p.values) {
      v *= 1.1;
    }
  }
  EXPECT_FALSE(test_quadratic_variation(paths, f).passed());
  const auto coarse = simulate_grid_paths(f, uniform_grid(1.0, 16), 100, 8);
  EXPECT_EQ(test_quadratic_variation(coarse, f).outcome, Outcome::inconclusive);
}

TEST(Verify, JumpTimes) {
  const auto f = poisson_family();
  const auto r = test_jump_times(pareto(1.0, f.c(), 100000, 9), 1.0, f);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.metric("survival_target"), 0.4144451136983333, 1e-12);
  EXPECT_FALSE(test_jump_times(pareto(1.0, 1.1 * f.c(), 100000, 9), 1.0, f).passed());
  EXPECT_THROW(test_jump_times(pareto(1.0, f.c(), 100, 9), 1.0, f), domain_error);
  EXPECT_THROW(test_jump_times(pareto(1.0, f.c(), 20000, 9), 1.0, gamma_family()), unsupported_family);
}

TEST(Verify, ModeAgreementRejectsMisclockedJumps) {
  // Jump innovations scaled by the segment start instead of the jump time.
  // At horizon 2 this is nearly invisible with 1e4 samples; horizon 4 exposes it.
  const auto f = poisson_family();
  const std::size_t m = 10000;
  const double horizon = 4.0;
  const double grid[] = {0.0, 1.0, horizon};
  const auto grid_values = sample_marginal(f, grid, m, 10, 1, 0);
  std::vector<double> good(m);
  std::vector<double> bad(m);
  for (std::size_t k = 0; k < m; ++k) {
    RandomStream a(10, (1ull << 40) + k);
    const double x0 = sample_gaussian(a);
    good[k] = simulate_event(f, 1.0, x0, horizon, a).terminal_value;
    RandomStream b(10, (1ull << 40) + k);
    const double y0 = sample_gaussian(b);
    bad[k] = simulate_event(f, 1.0, y0, horizon, b, JumpVarianceClock::segment_start).terminal_value;
  }
  EXPECT_TRUE(test_mode_agreement(grid_values, good, {1.0, horizon}, {1.0, horizon}).passed());
  EXPECT_FALSE(test_mode_agreement(grid_values, bad, {1.0, horizon}, {1.0, horizon}).passed());
  EXPECT_THROW(test_mode_agreement(grid_values, good, {1.0, horizon}, {1.0, 2.0}), domain_error);
}

TEST(Verify, ContinuityBound) {
  const auto model = sample_pairs(poisson_family(), 1.0, 1.1, 100000, 11);
  EXPECT_TRUE(test_continuity_bound(model, 1.0, 1.1, 0.5).passed());
  auto jumpy = model;
  for (std::size_t i = 0; i < jumpy.size(); i += 2) {
    jumpy[i].late = jumpy[i].early + 1.0;
  }
  EXPECT_FALSE(test_continuity_bound(jumpy, 1.0, 1.1, 0.5).passed());
}

TEST(Verify, SuitePassesAndIsThreadIndependent) {
  SuiteConfig cfg;
  cfg.paths = 20000;
  cfg.seed = 3;
  cfg.threads = 1;
  const auto one = run_verification(poisson_family(), cfg);
  cfg.threads = 3;
  const auto three = run_verification(poisson_family(), cfg);
  EXPECT_TRUE(all_gated_pass(one));
  ASSERT_EQ(one.size(), three.size());
  EXPECT_EQ(one.size(), 9u);
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].test_name, three[i].test_name);
    EXPECT_EQ(one[i].statistic, three[i].statistic);
  }
  cfg.threads = 1;
  const auto g = run_verification(gamma_family(), cfg);
  EXPECT_TRUE(all_gated_pass(g));
  EXPECT_EQ(g.size(), 7u);
}
