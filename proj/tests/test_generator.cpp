#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gaussmart/generator.hpp"

using namespace gaussmart;

namespace {

SubordinatorFamily poisson_family() { return calibrate(SubordinatorFamily::poisson(1.0)); }
SubordinatorFamily gamma_family() { return calibrate(SubordinatorFamily::gamma(1.0, 1.0)); }

}  // namespace

TEST(Generator, QuadraticIsCompensator) {
  for (const auto& f : {poisson_family(), gamma_family()}) {
    for (double s : {0.5, 1.0, 2.0}) {
      for (double x : {0.0, 0.8, -2.0}) {
        EXPECT_NEAR(apply_generator(f, Polynomial::monomial(2), s, x), compensator_x2(f, s, x), 1e-8)
            << to_string(f.kind()) << " s=" << s << " x=" << x;
      }
    }
  }
  EXPECT_NEAR(compensator_x2(poisson_family(), 2.0, 2.0), 1.196734670143683, 1e-12);
}

TEST(Generator, LinearAndConstantVanish) {
  for (const auto& f : {poisson_family(), gamma_family()}) {
    EXPECT_NEAR(apply_generator(f, Polynomial::monomial(1), 1.0, 0.8), 0.0, 1e-12);
    EXPECT_EQ(apply_generator(f, Polynomial::monomial(0), 1.0, 0.8), 0.0);
    EXPECT_EQ(difference_quotient(f, Polynomial{3.0}, 1.0, 0.8, 0.1), 0.0);
  }
}

TEST(Generator, AgreesWithDifferenceQuotients) {
  for (const auto& f : {poisson_family(), gamma_family()}) {
    const double tol = f.kind() == FamilyKind::gamma ? 0.02 : 0.01;
    for (int degree : {2, 3, 4}) {
      const auto p = Polynomial::monomial(degree);
      for (double s : {0.5, 1.0, 2.0}) {
        for (double x : {0.0, 0.8, -0.8, 2.0, -2.0}) {
          const double closed = apply_generator(f, p, s, x);
          const double dq = richardson_difference_quotient(f, p, s, x, 0.02 * s);
          // Odd moments vanish at x = 0; compare on the scale of the x^2 rate there.
          const double scale = std::max(std::abs(closed), 1.0 / s);
          EXPECT_LT(std::abs(dq - closed), tol * scale)
              << to_string(f.kind()) << " f=x^" << degree << " s=" << s << " x=" << x;
        }
      }
    }
  }
}

TEST(Generator, SpotValues) {
  const auto x3 = Polynomial::monomial(3);
  EXPECT_NEAR(apply_generator(poisson_family(), x3, 1.0, 0.8), 1.43184, 1e-4);
  EXPECT_NEAR(apply_generator(gamma_family(), x3, 1.0, 0.8), 1.70130, 1e-4);
}

TEST(Generator, RejectsDriftAndBadSteps) {
  const auto drifted = calibrate(SubordinatorFamily::compound(0.2, {{1.0, 1.0}}));
  EXPECT_THROW(apply_generator(drifted, Polynomial::monomial(2), 1.0, 0.0), unsupported_family);
  EXPECT_THROW(difference_quotient(poisson_family(), Polynomial::monomial(2), 1.0, 0.0, 2.0), domain_error);
  EXPECT_THROW(difference_quotient(poisson_family(), Polynomial::monomial(2), 0.0, 0.0, 0.1), domain_error);
}

TEST(Generator, CompoundWithoutDrift) {
  const auto f = calibrate(SubordinatorFamily::compound(0.0, {{0.5, 1.0}, {2.0, 0.3}}));
  EXPECT_NEAR(apply_generator(f, Polynomial::monomial(2), 1.0, 0.8), compensator_x2(f, 1.0, 0.8), 1e-10);
}

TEST(SqrtTaylor, Weights) {
  const auto m = sqrt_taylor_measure(2000);
  EXPECT_EQ(m.weights()[0], 0.0);
  EXPECT_EQ(m.weights()[1], 0.5);
  EXPECT_DOUBLE_EQ(m.weights()[2], 0.125);
  EXPECT_DOUBLE_EQ(m.weights()[3], 0.0625);
  for (int n = 1; n < 2000; ++n) {
    ASSERT_GT(m.weights()[n], m.weights()[n + 1]);
  }
}

TEST(SqrtTaylor, LaplaceIdentity) {
  const auto m = sqrt_taylor_measure(400);
  for (double u : {0.3, 1.0, 2.5}) {
    EXPECT_NEAR(m.laplace(u), 1.0 - std::sqrt(-std::expm1(-u)), 1e-10) << u;
  }
}

TEST(SqrtTaylor, TailBound) {
  const auto m = sqrt_taylor_measure(100000);
  for (int n : {1, 10, 100, 1000, 10000}) {
    const double tail = 1.0 - m.partial_sum(n);
    EXPECT_GT(tail, 0.0);
    EXPECT_LT(tail, 1.2 / std::sqrt(std::numbers::pi * n)) << n;
  }
  EXPECT_THROW(sqrt_taylor_measure(0), domain_error);
}

TEST(GammaLimit, FrullaniValue) {
  const auto r = gamma_limit_check(1.0, "one_minus_exp", 1e-3);
  EXPECT_NEAR(r.rhs, std::log(2.0), 1e-10);
  EXPECT_NEAR(r.lhs, std::log(2.0), 0.01 * std::log(2.0));
}

TEST(GammaLimit, ConvergesAsShapeShrinks) {
  for (const char* tag : {"one_minus_exp", "v_over_1pv"}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double p : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const auto r = gamma_limit_check(2.0, tag, p);
      const double gap = std::abs(r.lhs - r.rhs);
      EXPECT_LT(gap, prev) << tag << " p=" << p;
      prev = gap;
    }
  }
  EXPECT_THROW(gamma_limit_check(1.0, "cosine", 0.1), domain_error);
  EXPECT_THROW(gamma_limit_check(0.0, "v_over_1pv", 0.1), domain_error);
}
