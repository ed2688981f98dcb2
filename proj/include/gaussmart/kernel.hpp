#pragma once

// Transition law P_{s,t}(x, dy) of the martingale, split into an atom at
// sigma x of mass gamma(sigma) and a Gaussian mixture
//
//   E[ phi(sigma sqrt(R) x, t (1 - R), y) ; R < 1 ],   sigma = sqrt(t/s).
//
// Poisson kind: exact mixture over the number k >= 1 of subordinator jumps
// (R = e^{-k}), truncated once the remaining Poisson mass is below 1e-12.
// Gamma kind: U = -ln R is Gamma(alpha = a ln sigma, rate b). Moments use a
// fixed adaptive rule for the mixing law; pointwise densities use their own
// adaptive integration. For alpha < 1 both integrate in v = (b u)^alpha, where
// the mixing law becomes exp(-v^{1/alpha}) dv / Gamma(alpha + 1).
// Compound kind: Monte Carlo over R with a reported standard error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"
#include "family.hpp"
#include "gaussian.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "sampler.hpp"

namespace gaussmart {

/// One Gaussian component N(mean, variance) of the absolutely continuous part.
struct MixtureComponent {
  double weight;
  double mean;
  double variance;
};

struct QuadratureSpec {
  std::string method;
  std::size_t nodes = 0;
  double error_estimate = 0.0;
  // Suggested y range: mean +- 10 sd of the widest component.
  double y_lo = 0.0;
  double y_hi = 0.0;
};

struct KernelOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t monte_carlo_draws = 100000;
  std::uint64_t seed = 0;
};

struct KernelEval {
  double atom_weight = 0.0;
  double atom_location = 0.0;
  std::vector<MixtureComponent> components;
  QuadratureSpec quadrature;
  std::function<double(double)> density;
  // Monte Carlo standard error of the density (compound kind only; zero otherwise).
  std::function<double(double)> density_standard_error;

  /// Density of the mixture components alone; equals `density` except for the
  /// gamma kind, where it is the fixed-rule approximation.
  double mixture_density(double y) const {
    double v = 0.0;
    for (const auto& c : components) {
      if (c.variance > 0.0) {
        v += c.weight * normal_pdf(c.mean, c.variance, y);
      }
    }
    return v;
  }

  /// Integral of f against the full kernel (atom plus mixture).
  double expectation(const Polynomial& f) const {
    double v = atom_weight * f(atom_location);
    for (const auto& c : components) {
      v += c.weight * f.gaussian_expectation(c.mean, std::max(c.variance, 0.0));
    }
    return v;
  }

  double absolutely_continuous_mass() const {
    double v = 0.0;
    for (const auto& c : components) {
      v += c.weight;
    }
    return v;
  }
};

namespace detail {

inline void finish_range(KernelEval& k) {
  double lo = k.atom_location;
  double hi = k.atom_location;
  double widest = 0.0;
  for (const auto& c : k.components) {
    widest = std::max(widest, c.variance);
  }
  const double sd = std::sqrt(widest);
  for (const auto& c : k.components) {
    lo = std::min(lo, c.mean - 10.0 * sd);
    hi = std::max(hi, c.mean + 10.0 * sd);
  }
  k.quadrature.y_lo = lo;
  k.quadrature.y_hi = hi;
}

// Mixing law of U ~ Gamma(alpha, b), exposed as a change of variables
// v -> (u(v), density-in-v).
struct GammaMixing {
  double alpha;
  double b;
  double upper;     // end of the integration range in the working variable
  bool substituted; // true: working variable is v = (b u)^alpha
  double log_norm;  // log normalising constant

  static GammaMixing make(double alpha, double b) {
    GammaMixing g{alpha, b, 0.0, alpha < 1.0, 0.0};
    // Tail mass beyond b*u = L is below ~1e-17.
    const double big_l = std::max(45.0, alpha + 15.0 * std::sqrt(alpha) + 45.0);
    if (g.substituted) {
      g.upper = std::pow(big_l, alpha);
      g.log_norm = -boost::math::lgamma(alpha + 1.0);
    } else {
      g.upper = big_l / b;
      g.log_norm = alpha * std::log(b) - boost::math::lgamma(alpha);
    }
    return g;
  }

  std::vector<double> breakpoints() const {
    if (substituted) {
      return upper > 1.0 ? std::vector<double>{0.0, 1.0, upper} : std::vector<double>{0.0, upper};
    }
    const double mode = (alpha - 1.0) / b;
    if (mode > 0.0 && mode < upper) {
      return {0.0, mode, upper};
    }
    return {0.0, upper};
  }

  // (u, density of the working variable)
  std::pair<double, double> at(double w) const {
    if (substituted) {
      const double bu = std::pow(w, 1.0 / alpha);
      return {bu / b, std::exp(log_norm - bu)};
    }
    if (w <= 0.0) {
      return {0.0, 0.0};
    }
    return {w, std::exp(log_norm + (alpha - 1.0) * std::log(w) - b * w)};
  }
};

inline KernelEval gamma_kernel(const SubordinatorFamily& family, double sigma, double t, double x,
                               const KernelOptions& opt) {
  KernelEval k;
  k.atom_weight = 0.0;
  k.atom_location = sigma * x;
  const double alpha = family.a() * std::log(sigma);
  const GammaMixing mix = GammaMixing::make(alpha, family.b());

  // Refine on E[e^{-lambda U}], lambda = 0, 1/2, ..., 4: every polynomial
  // moment of degree <= 8 is a combination of these.
  constexpr std::size_t n_test = 9;
  auto tests = [&mix](double w) {
    const auto [u, dens] = mix.at(w);
    quadrature::Vec<n_test> out{};
    const double half = std::exp(-0.5 * u);
    double p = dens;
    for (std::size_t i = 0; i < n_test; ++i) {
      out[i] = p;
      p *= half;
    }
    return out;
  };
  const auto rule = quadrature::integrate<n_test>(tests, mix.breakpoints(), 1e-15, 1e-13, 4000);
  double worst = 0.0;
  for (double e : rule.error) {
    worst = std::max(worst, e);
  }
  const auto nodes = quadrature::panel_nodes(rule.panels);
  k.components.reserve(nodes.size());
  for (const auto& n : nodes) {
    const auto [u, dens] = mix.at(n.x);
    const double w = n.w * dens;
    if (w == 0.0) {
      continue;
    }
    k.components.push_back({w, sigma * std::exp(-0.5 * u) * x, -t * std::expm1(-u)});
  }
  k.quadrature = {"gauss-kronrod-15 adaptive (mixing rule)", nodes.size(), worst, 0.0, 0.0};

  const double rel_tol = opt.rel_tol;
  const double abs_tol = opt.abs_tol;
  k.density = [mix, sigma, t, x, rel_tol, abs_tol](double y) {
    auto integrand = [&](double w) {
      const auto [u, dens] = mix.at(w);
      const double var = -t * std::expm1(-u);
      if (!(var > 0.0) || dens == 0.0) {
        return 0.0;
      }
      return dens * normal_pdf(sigma * std::exp(-0.5 * u) * x, var, y);
    };
    return quadrature::integrate_scalar(integrand, mix.breakpoints(), abs_tol, rel_tol, 4000).value;
  };
  k.density_standard_error = [](double) { return 0.0; };
  return k;
}

inline KernelEval poisson_kernel(const SubordinatorFamily& family, double sigma, double t, double x) {
  KernelEval k;
  const double mean = family.c() * std::log(sigma);
  k.atom_weight = std::exp(-mean);
  k.atom_location = sigma * x;
  double p = k.atom_weight;
  double tail = 1.0 - p;
  for (int j = 1; j < 10000; ++j) {
    p *= mean / j;
    tail -= p;
    if (p > 0.0) {
      k.components.push_back({p, sigma * std::exp(-0.5 * j) * x, -t * std::expm1(-static_cast<double>(j))});
    }
    // Remaining mass past j is at most p_{j+1} (j+2)/(j+2-mean) once j+1 > mean.
    const double next = p * mean / (j + 1);
    if (j + 1 > mean && next * (j + 2) / (j + 2 - mean) < 1e-12) {
      break;
    }
  }
  k.quadrature = {"poisson mixture (exact, truncated)", k.components.size(), std::abs(tail), 0.0, 0.0};
  auto comps = k.components;
  k.density = [comps](double y) {
    double v = 0.0;
    for (const auto& c : comps) {
      v += c.weight * normal_pdf(c.mean, c.variance, y);
    }
    return v;
  };
  k.density_standard_error = [](double) { return 0.0; };
  return k;
}

inline KernelEval compound_kernel(const SubordinatorFamily& family, double sigma, double t,
                                  double x, const KernelOptions& opt) {
  KernelEval k;
  k.atom_weight = gamma_atom(family, sigma);
  k.atom_location = sigma * x;
  RandomStream stream(opt.seed, verification_stream_base);
  const std::size_t n = std::max<std::size_t>(opt.monte_carlo_draws, 2);
  const double w = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = sample_subordinator_increment(family, sigma, stream);
    if (u > 0.0) {
      k.components.push_back({w, sigma * std::exp(-0.5 * u) * x, -t * std::expm1(-u)});
    }
  }
  // Standard error of the mass: binomial count of draws with R < 1.
  const double frac = static_cast<double>(k.components.size()) * w;
  k.quadrature = {"monte carlo over R", n, std::sqrt(frac * (1.0 - frac) * w), 0.0, 0.0};
  auto comps = k.components;
  k.density = [comps](double y) {
    double v = 0.0;
    for (const auto& c : comps) {
      v += c.weight * normal_pdf(c.mean, c.variance, y);
    }
    return v;
  };
  k.density_standard_error = [comps, n](double y) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (const auto& c : comps) {
      const double v = normal_pdf(c.mean, c.variance, y);
      s1 += v;
      s2 += v * v;
    }
    const double dn = static_cast<double>(n);
    const double m = s1 / dn;
    return std::sqrt(std::max(0.0, s2 / dn - m * m) / (dn - 1.0));
  };
  return k;
}

}  // namespace detail

/// Build P_{s,t}(x, .). At s = 0 the kernel is N(x, t) with no atom.
inline KernelEval make_kernel(const SubordinatorFamily& family, double s, double t, double x,
                              const KernelOptions& opt = {}) {
  if (!(s >= 0.0) || !(t > s) || !std::isfinite(t)) {
    throw domain_error("kernel: need 0 <= s < t");
  }
  KernelEval k;
  if (s == 0.0) {
    k.atom_weight = 0.0;
    k.atom_location = x;
    k.components = {{1.0, x, t}};
    k.quadrature = {"gaussian (closed form)", 1, 0.0, 0.0, 0.0};
    k.density = [x, t](double y) { return normal_pdf(x, t, y); };
    k.density_standard_error = [](double) { return 0.0; };
    detail::finish_range(k);
    return k;
  }
  detail::require_calibrated(family, "kernel");
  const double sigma = std::sqrt(t / s);
  if (family.degenerate()) {
    // R = sigma^{-2}: a single Gaussian, no atom.
    const double r = 1.0 / (sigma * sigma);
    k.atom_location = sigma * x;
    k.components = {{1.0, sigma * std::sqrt(r) * x, t * (1.0 - r)}};
    k.quadrature = {"gaussian (closed form)", 1, 0.0, 0.0, 0.0};
    const auto c = k.components[0];
    k.density = [c](double y) { return normal_pdf(c.mean, c.variance, y); };
    k.density_standard_error = [](double) { return 0.0; };
    detail::finish_range(k);
    return k;
  }
  switch (family.kind()) {
    case FamilyKind::poisson:
      k = detail::poisson_kernel(family, sigma, t, x);
      break;
    case FamilyKind::gamma:
      k = detail::gamma_kernel(family, sigma, t, x, opt);
      break;
    case FamilyKind::compound:
      k = detail::compound_kernel(family, sigma, t, x, opt);
      break;
  }
  detail::finish_range(k);
  return k;
}

struct TransitionDensity {
  double atom_weight;
  double atom_location;
  double density;
};

/// Atom and absolutely continuous density of P_{s,t}(x, .) at y. At the atom
/// location only the density part is reported.
inline TransitionDensity transition_density(const SubordinatorFamily& family, double s, double t,
                                            double x, double y, const KernelOptions& opt = {}) {
  const auto k = make_kernel(family, s, t, x, opt);
  return {k.atom_weight, k.atom_location, k.density(y)};
}

/// Integral of y^k against P_{s,t}(x, dy), k = 0..4.
inline double kernel_moment(const SubordinatorFamily& family, double s, double t, double x, int k,
                            const KernelOptions& opt = {}) {
  if (k < 0 || k > 4) {
    throw domain_error("kernel_moment: order must be in 0..4");
  }
  const auto kern = make_kernel(family, s, t, x, opt);
  if (family.kind() != FamilyKind::compound && kern.quadrature.error_estimate > 1e-6) {
    throw numeric_failure("kernel_moment: quadrature did not converge", kern.quadrature.error_estimate);
  }
  return kern.expectation(Polynomial::monomial(k));
}

struct GridSpec {
  std::size_t nodes = 2048;
  // Half-width of the symmetric y/z grid; <= 0 means 6 sqrt(u).
  double half_width = 0.0;
};

struct CkResidual {
  double sup_residual;
  double atom_residual;
};

/// Compose P_{s,t} and P_{t,u} numerically and compare with P_{s,u}. The atom
/// part is compared exactly; the absolutely continuous parts on a uniform grid,
/// with the intermediate integral by the trapezoid rule on the same grid.
/// Mixture kernels are evaluated through their components (for the gamma kind
/// this is the fixed mixing rule).
inline CkResidual ck_residual(const SubordinatorFamily& family, double s, double t, double u,
                              double x, const GridSpec& grid = {}, const KernelOptions& opt = {}) {
  if (!(s >= 0.0) || !(t > s) || !(u > t)) {
    throw domain_error("ck_residual: need 0 <= s < t < u");
  }
  if (s == 0.0 && x != 0.0) {
    throw domain_error("ck_residual: composition from time 0 starts at x = 0");
  }
  if (grid.nodes < 3) {
    throw domain_error("ck_residual: grid needs at least three nodes");
  }
  detail::require_calibrated(family, "ck_residual");
  const double half_width = grid.half_width > 0.0 ? grid.half_width : 6.0 * std::sqrt(u);
  const std::size_t n = grid.nodes;
  const double h = 2.0 * half_width / static_cast<double>(n - 1);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = -half_width + h * static_cast<double>(i);
  }

  const auto first = make_kernel(family, s, t, x, opt);
  const auto direct = make_kernel(family, s, u, x, opt);
  const double tau = std::sqrt(u / t);
  const double gamma_tau = gamma_atom(family, tau);

  std::vector<double> first_density(n);
  for (std::size_t i = 0; i < n; ++i) {
    first_density[i] = first.mixture_density(y[i]);
  }

  // Second-step components depend on y only through the mean factor
  // tau sqrt(r); build them once from y = 1.
  const auto second_unit = make_kernel(family, t, u, 1.0, opt);

  std::vector<double> composed(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double wy = (i == 0 || i + 1 == n ? 0.5 : 1.0) * h * first_density[i];
    if (wy == 0.0) {
      continue;
    }
    for (const auto& c : second_unit.components) {
      const double mean = c.mean * y[i];
      const double scale = wy * c.weight / std::sqrt(2.0 * std::numbers::pi * c.variance);
      const double inv2v = 0.5 / c.variance;
      for (std::size_t j = 0; j < n; ++j) {
        const double d = y[j] - mean;
        composed[j] += scale * std::exp(-d * d * inv2v);
      }
    }
  }
  // atom x density and density x atom terms
  if (first.atom_weight > 0.0) {
    for (const auto& c : second_unit.components) {
      const double mean = c.mean * first.atom_location;
      for (std::size_t j = 0; j < n; ++j) {
        composed[j] += first.atom_weight * c.weight * normal_pdf(mean, c.variance, y[j]);
      }
    }
  }
  if (gamma_tau > 0.0) {
    for (std::size_t j = 0; j < n; ++j) {
      composed[j] += gamma_tau * first.mixture_density(y[j] / tau) / tau;
    }
  }
  double sup = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sup = std::max(sup, std::abs(composed[j] - direct.mixture_density(y[j])));
  }
  return {sup, std::abs(first.atom_weight * gamma_tau - direct.atom_weight)};
}

}  // namespace gaussmart
