#pragma once

// Infinitesimal generator of the drift-free families on polynomials:
//
//   A_s f(x) = x f'(x) / (2s)
//            + 1/(2s) int nu(dw) ( E f(x + Z_w) - f(x) ),
//   Z_w ~ N((e^{-w/2} - 1) x, s (1 - e^{-w})),
//
// with the inner Gaussian expectation in closed form. The semigroup side is a
// kernel difference quotient (E[f(X_{s+h}) | X_s = x] - f(x)) / h.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"
#include "family.hpp"
#include "kernel.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"

namespace gaussmart {

namespace detail {

// E f(x + Z_w) - f(x).
inline double jump_bracket(const Polynomial& f, double s, double x, double w) {
  const double mean = std::expm1(-0.5 * w) * x;
  const double variance = -s * std::expm1(-w);
  return f.gaussian_expectation(x + mean, variance) - f(x);
}

}  // namespace detail

/// Split point for the gamma Levy integral: below it the jump bracket is
/// replaced by its second-order Taylor expansion.
inline constexpr double small_jump_cutoff = 1e-4;

inline double apply_generator(const SubordinatorFamily& family, const Polynomial& f, double s,
                              double x) {
  if (!(s > 0.0)) {
    throw domain_error("apply_generator: s must be positive");
  }
  detail::require_calibrated(family, "apply_generator");
  if (family.drift() > 0.0) {
    throw unsupported_family("apply_generator: no generator formula for families with drift");
  }
  const double drift_term = x * f.derivative()(x) / (2.0 * s);
  double levy_integral = 0.0;
  switch (family.kind()) {
    case FamilyKind::poisson:
      levy_integral = family.c() * detail::jump_bracket(f, s, x, 1.0);
      break;
    case FamilyKind::compound:
      for (const auto& at : family.atoms()) {
        levy_integral += at.weight * detail::jump_bracket(f, s, x, at.location);
      }
      break;
    case FamilyKind::gamma: {
      const double a = family.a();
      const double b = family.b();
      const Polynomial f1 = f.derivative();
      const Polynomial f2 = f1.derivative();
      const double d1 = f1(x);
      const double d2 = f2(x);
      // (0, eps]: f'(x) m + f''(x) (v + m^2) / 2 against a e^{-b w} / w.
      auto small = [&](double w) {
        const double m = std::expm1(-0.5 * w) * x;
        const double v = -s * std::expm1(-w);
        return (d1 * m + 0.5 * d2 * (v + m * m)) * a * std::exp(-b * w) / w;
      };
      const auto near = quadrature::integrate_scalar(small, {0.0, small_jump_cutoff}, 1e-16, 1e-13);
      // (eps, inf) in log w: dw / w = d(log w).
      auto large = [&](double lw) {
        const double w = std::exp(lw);
        return detail::jump_bracket(f, s, x, w) * a * std::exp(-b * w);
      };
      const double top = std::log(60.0 / b);
      std::vector<double> cuts{std::log(small_jump_cutoff)};
      for (double c = std::ceil(cuts.back()); c < top; c += 1.0) {
        cuts.push_back(c);
      }
      cuts.push_back(top);
      const auto far = quadrature::integrate_scalar(large, cuts, 1e-15, 1e-13);
      if (!near.converged || !far.converged) {
        throw numeric_failure("apply_generator: Levy integral did not converge",
                              near.error + far.error);
      }
      levy_integral = near.value + far.value;
      break;
    }
  }
  return drift_term + levy_integral / (2.0 * s);
}

/// (E[f(X_{s+h}) | X_s = x] - f(x)) / h from the transition kernel.
inline double difference_quotient(const SubordinatorFamily& family, const Polynomial& f, double s,
                                  double x, double h, const KernelOptions& opt = {}) {
  if (!(s > 0.0)) {
    throw domain_error("difference_quotient: s must be positive");
  }
  if (!(h > 0.0) || h > s) {
    throw domain_error("difference_quotient: need 0 < h <= s");
  }
  if (f.degree() == 0) {
    return 0.0;
  }
  const auto kern = make_kernel(family, s, s + h, x, opt);
  if (family.kind() != FamilyKind::compound && kern.quadrature.error_estimate > 1e-6) {
    throw numeric_failure("difference_quotient: quadrature did not converge",
                          kern.quadrature.error_estimate);
  }
  return (kern.expectation(f) - f(x)) / h;
}

/// First-order Richardson extrapolation 2 D(h/2) - D(h).
inline double richardson_difference_quotient(const SubordinatorFamily& family, const Polynomial& f,
                                             double s, double x, double h,
                                             const KernelOptions& opt = {}) {
  return 2.0 * difference_quotient(family, f, s, x, 0.5 * h, opt) -
         difference_quotient(family, f, s, x, h, opt);
}

/// Density of the predictable quadratic variation: delta + (1 - delta) x^2 / s.
inline double compensator_x2(const SubordinatorFamily& family, double s, double x) {
  if (!(s > 0.0)) {
    throw domain_error("compensator_x2: s must be positive");
  }
  const double d = delta(family);
  return d + (1.0 - d) * x * x / s;
}

/// Taylor weights of 1 - sqrt(1 - z) = sum_n w_n z^n, w_n = Gamma(n - 1/2) / (2 sqrt(pi) n!).
/// weights()[0] is zero; the weights of n >= 1 form a probability measure on N.
class SqrtTaylorMeasure {
 public:
  explicit SqrtTaylorMeasure(int n_max) {
    if (n_max < 1) {
      throw domain_error("sqrt_taylor_measure: n_max must be >= 1");
    }
    weights_.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    weights_[1] = 0.5;
    for (int n = 1; n < n_max; ++n) {
      weights_[n + 1] = weights_[n] * (n - 0.5) / (n + 1);
    }
  }

  int n_max() const noexcept { return static_cast<int>(weights_.size()) - 1; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double partial_sum(int n) const {
    double v = 0.0;
    for (int k = 1; k <= n && k <= n_max(); ++k) {
      v += weights_[k];
    }
    return v;
  }

  /// sum_n w_n e^{-n u}; equals 1 - sqrt(1 - e^{-u}) as n_max grows.
  double laplace(double u) const {
    double v = 0.0;
    const double q = std::exp(-u);
    double p = 1.0;
    for (int n = 1; n <= n_max(); ++n) {
      p *= q;
      v += weights_[n] * p;
    }
    return v;
  }

 private:
  std::vector<double> weights_;
};

inline SqrtTaylorMeasure sqrt_taylor_measure(int n_max) { return SqrtTaylorMeasure(n_max); }

enum class LimitTestFunction { one_minus_exp, v_over_1pv };

inline LimitTestFunction parse_limit_test_function(const std::string& tag) {
  if (tag == "one_minus_exp") {
    return LimitTestFunction::one_minus_exp;
  }
  if (tag == "v_over_1pv") {
    return LimitTestFunction::v_over_1pv;
  }
  throw domain_error("gamma_limit_check: unknown test function '" + tag + "'");
}

struct LimitCheck {
  double lhs;
  double rhs;
};

/// (1/p) E[g(V_p)] for V_p ~ Gamma(p, b), against its p -> 0 limit
/// int g(v) / v e^{-b v} dv. Both integrals run in log v.
inline LimitCheck gamma_limit_check(double b, LimitTestFunction g_id, double p) {
  if (!(b > 0.0) || !(p > 0.0)) {
    throw domain_error("gamma_limit_check: need b > 0 and p > 0");
  }
  auto g = [g_id](double v) {
    switch (g_id) {
      case LimitTestFunction::one_minus_exp:
        return -std::expm1(-v);
      case LimitTestFunction::v_over_1pv:
        return v / (1.0 + v);
    }
    return 0.0;
  };
  const double log_gamma_p1 = boost::math::lgamma(p + 1.0);
  std::vector<double> cuts;
  for (double c = -60.0; c < 5.0; c += 5.0) {
    cuts.push_back(c);
  }
  cuts.push_back(5.0);
  // theta = ln(b v): (1/p) h_p(v) dv = exp(p theta - e^theta) / Gamma(p + 1) d theta
  auto lhs_integrand = [&](double theta) {
    const double bv = std::exp(theta);
    return g(bv / b) * std::exp(p * theta - bv - log_gamma_p1);
  };
  // theta = ln(b v): g(v)/v e^{-bv} dv = g(e^theta / b) e^{-e^theta} d theta
  auto rhs_integrand = [&](double theta) {
    const double bv = std::exp(theta);
    return g(bv / b) * std::exp(-bv);
  };
  const auto lhs = quadrature::integrate_scalar(lhs_integrand, cuts, 1e-15, 1e-12);
  const auto rhs = quadrature::integrate_scalar(rhs_integrand, cuts, 1e-15, 1e-12);
  if (!lhs.converged || !rhs.converged) {
    throw numeric_failure("gamma_limit_check: quadrature did not converge", lhs.error + rhs.error);
  }
  return {lhs.value, rhs.value};
}

inline LimitCheck gamma_limit_check(double b, const std::string& g_tag, double p) {
  return gamma_limit_check(b, parse_limit_test_function(g_tag), p);
}

}  // namespace gaussmart
