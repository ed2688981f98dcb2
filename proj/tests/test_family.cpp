#include <cmath>

#include <gtest/gtest.h>

#include "gaussmart/family.hpp"

using namespace gaussmart;

namespace {

const double calibrated_c = 2.541494082536798;
const double calibrated_a = 2.466303462376432;

}  // namespace

TEST(Family, PoissonCalibrationClosedForm) {
  const auto f = calibrate(SubordinatorFamily::poisson(1.0));
  EXPECT_NEAR(f.c(), calibrated_c, 1e-13);
  EXPECT_NEAR(psi(f, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(delta(f), 0.5 * (1.0 + std::exp(-0.5)), 1e-12);
  EXPECT_NEAR(delta(f), 0.8032653298563167, 1e-12);
}

TEST(Family, GammaCalibrationClosedForm) {
  const auto f = calibrate(SubordinatorFamily::gamma(1.0, 1.0));
  EXPECT_NEAR(f.a(), calibrated_a, 1e-13);
  EXPECT_NEAR(psi(f, 0.5), 1.0, 1e-12);
  EXPECT_NEAR(delta(f), std::log(2.0) / (2.0 * std::log(1.5)), 1e-12);
  EXPECT_NEAR(psi(f, 1.0), calibrated_a * std::log(2.0), 1e-12);
}

TEST(Family, GammaCalibrationOtherScales) {
  for (double b : {0.1, 0.5, 3.0, 20.0}) {
    const auto f = calibrate(SubordinatorFamily::gamma(7.0, b));
    EXPECT_NEAR(psi(f, 0.5), 1.0, 1e-12) << "b=" << b;
    EXPECT_NEAR(f.a(), 1.0 / std::log1p(0.5 / b), 1e-12);
  }
}

TEST(Family, CalibrationIsIdempotent) {
  const auto once = calibrate(SubordinatorFamily::gamma(3.0, 2.0));
  const auto twice = calibrate(once);
  EXPECT_TRUE(once == twice);
  const auto comp = calibrate(SubordinatorFamily::compound(0.3, {{0.5, 1.0}, {2.0, 0.25}}));
  EXPECT_NEAR(psi(comp, 0.5), 1.0, 1e-12);
  EXPECT_TRUE(calibrate(comp) == comp);
}

TEST(Family, CompoundCalibrationScalesWholeTriple) {
  const auto raw = SubordinatorFamily::compound(0.3, {{0.5, 1.0}, {2.0, 0.25}});
  const auto f = calibrate(raw);
  const double k = 1.0 / raw.raw_psi(0.5);
  EXPECT_NEAR(f.beta(), 0.3 * k, 1e-14);
  EXPECT_NEAR(f.atoms()[0].weight, 1.0 * k, 1e-14);
  EXPECT_NEAR(f.atoms()[1].weight, 0.25 * k, 1e-14);
  EXPECT_DOUBLE_EQ(f.atoms()[1].location, 2.0);
}

TEST(Family, PsiIsIncreasingAndConcave) {
  for (const auto& f : {calibrate(SubordinatorFamily::poisson(1.0)),
                        calibrate(SubordinatorFamily::gamma(1.0, 1.0)),
                        calibrate(SubordinatorFamily::compound(0.2, {{1.0, 0.7}, {0.3, 2.0}}))}) {
    EXPECT_DOUBLE_EQ(psi(f, 0.0), 0.0);
    double prev = 0.0;
    double prev_slope = std::numeric_limits<double>::infinity();
    const double h = 0.05;
    for (int i = 1; i <= 80; ++i) {
      const double lam = i * h;
      const double v = psi(f, lam);
      EXPECT_GT(v, prev);
      const double slope = (v - prev) / h;
      EXPECT_LE(slope, prev_slope + 1e-12);
      prev = v;
      prev_slope = slope;
    }
  }
}

TEST(Family, LaplaceSemigroupLaw) {
  const auto f = calibrate(SubordinatorFamily::gamma(1.0, 0.7));
  for (double lam : {0.25, 0.5, 1.0, 3.0}) {
    for (double sigma : {1.3, 2.0}) {
      for (double tau : {1.1, 4.0}) {
        EXPECT_NEAR(laplace(f, sigma * tau, lam), laplace(f, sigma, lam) * laplace(f, tau, lam), 1e-14);
      }
    }
  }
}

TEST(Family, MartingaleLaplaceValue) {
  // Calibration makes E[sqrt(R_sigma)] = 1/sigma.
  const auto f = calibrate(SubordinatorFamily::poisson(1.0));
  for (double sigma : {1.5, 2.0, 10.0}) {
    EXPECT_NEAR(laplace(f, sigma, 0.5), 1.0 / sigma, 1e-14);
  }
  EXPECT_NEAR(laplace(f, 2.0, 1.0), 0.3283870954934342, 1e-12);
}

TEST(Family, AtomIsMultiplicative) {
  const auto p = calibrate(SubordinatorFamily::poisson(1.0));
  EXPECT_NEAR(gamma_atom(p, std::sqrt(2.0)), 0.4144451136983333, 1e-12);
  EXPECT_NEAR(gamma_atom(p, 6.0), gamma_atom(p, 2.0) * gamma_atom(p, 3.0), 1e-14);
  EXPECT_DOUBLE_EQ(gamma_atom(p, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(gamma_atom(calibrate(SubordinatorFamily::gamma(1.0, 1.0)), 2.0), 0.0);
  EXPECT_DOUBLE_EQ(gamma_atom(calibrate(SubordinatorFamily::compound(0.1, {{1.0, 1.0}})), 2.0), 0.0);
  const auto pure = calibrate(SubordinatorFamily::compound(0.0, {{1.0, 1.0}, {2.0, 0.5}}));
  EXPECT_NEAR(gamma_atom(pure, 2.0), std::pow(2.0, -pure.levy_mass()), 1e-14);
}

TEST(Family, BrownianBoundary) {
  const auto f = SubordinatorFamily::brownian();
  EXPECT_TRUE(f.degenerate());
  EXPECT_NEAR(psi(f, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(delta(f), 1.0, 1e-15);
}

TEST(Family, RejectsInvalidParameters) {
  EXPECT_THROW(SubordinatorFamily::poisson(0.0), invalid_family);
  EXPECT_THROW(SubordinatorFamily::poisson(-1.0), invalid_family);
  EXPECT_THROW(SubordinatorFamily::gamma(1.0, 0.0), invalid_family);
  EXPECT_THROW(SubordinatorFamily::gamma(std::nan(""), 1.0), invalid_family);
  EXPECT_THROW(SubordinatorFamily::compound(0.0, {}), invalid_family);
  EXPECT_THROW(SubordinatorFamily::compound(1.0, {}), invalid_family);
  EXPECT_THROW(SubordinatorFamily::compound(-0.1, {{1.0, 1.0}}), invalid_family);
  EXPECT_THROW(SubordinatorFamily::compound(0.0, {{0.0, 1.0}}), invalid_family);
  EXPECT_THROW(SubordinatorFamily::compound(0.0, {{1.0, -1.0}}), invalid_family);
  EXPECT_NO_THROW(SubordinatorFamily::compound(1.0, {}, true));
}

TEST(Family, UncalibratedUseIsAnError) {
  const auto raw = SubordinatorFamily::poisson(1.0);
  EXPECT_THROW(delta(raw), state_error);
  EXPECT_THROW(laplace(calibrate(raw), 0.5, 1.0), domain_error);
  EXPECT_THROW(gamma_atom(calibrate(raw), 0.9), domain_error);
}
