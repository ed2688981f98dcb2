#pragma once

// Log-convolution semigroups described by the Laplace exponent of the
// subordinator U_sigma = -ln R_sigma:
//
//   E[R_sigma^lambda] = sigma^{-psi(lambda)},
//   psi(lambda) = beta*lambda + int (1 - e^{-lambda x}) nu(dx).
//
// The martingale condition on the induced process is psi(1/2) = 1.

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace gaussmart {

enum class FamilyKind { poisson, gamma, compound };

inline std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::poisson:
      return "poisson";
    case FamilyKind::gamma:
      return "gamma";
    case FamilyKind::compound:
      return "compound";
  }
  return "unknown";
}

/// One point mass of a finite Levy measure.
struct Atom {
  double location;
  double weight;
};

class SubordinatorFamily {
 public:
  /// Levy measure c * eps_1: U_sigma is Poisson with mean c ln(sigma).
  static SubordinatorFamily poisson(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw invalid_family("poisson intensity must be positive and finite");
    }
    SubordinatorFamily f;
    f.kind_ = FamilyKind::poisson;
    f.c_ = c;
    return f;
  }

  /// Levy density a x^{-1} e^{-b x}: U_sigma is Gamma(a ln sigma, rate b).
  static SubordinatorFamily gamma(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      throw invalid_family("gamma shape rate and inverse scale must be positive and finite");
    }
    SubordinatorFamily f;
    f.kind_ = FamilyKind::gamma;
    f.a_ = a;
    f.b_ = b;
    return f;
  }

  /// Drift beta plus a finite list of atoms. A drift-only family is the
  /// deterministic (Brownian) boundary case and needs `allow_degenerate`.
  static SubordinatorFamily compound(double beta, std::vector<Atom> atoms,
                                     bool allow_degenerate = false) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
      throw invalid_family("drift must be nonnegative and finite");
    }
    for (const auto& at : atoms) {
      if (!(at.location > 0.0) || !(at.weight > 0.0) || !std::isfinite(at.location) ||
          !std::isfinite(at.weight)) {
        throw invalid_family("atom locations and weights must be positive and finite");
      }
    }
    if (atoms.empty() && beta == 0.0) {
      throw invalid_family("empty Levy triple");
    }
    if (atoms.empty() && !allow_degenerate) {
      throw invalid_family("drift-only family is degenerate (R deterministic); pass allow_degenerate");
    }
    SubordinatorFamily f;
    f.kind_ = FamilyKind::compound;
    f.beta_ = beta;
    f.atoms_ = std::move(atoms);
    f.degenerate_ = f.atoms_.empty();
    return f;
  }

  /// Calibrated pure drift beta = 2: R_sigma = sigma^{-2}, the process is Brownian motion.
  static SubordinatorFamily brownian() { return compound(2.0, {}, true).mark_calibrated(); }

  FamilyKind kind() const noexcept { return kind_; }
  bool calibrated() const noexcept { return calibrated_; }
  bool degenerate() const noexcept { return degenerate_; }

  double c() const noexcept { return c_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double beta() const noexcept { return beta_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }

  /// nu((0, inf)); infinite for the gamma kind.
  double levy_mass() const noexcept {
    switch (kind_) {
      case FamilyKind::poisson:
        return c_;
      case FamilyKind::gamma:
        return std::numeric_limits<double>::infinity();
      case FamilyKind::compound:
        return std::accumulate(atoms_.begin(), atoms_.end(), 0.0,
                               [](double acc, const Atom& at) { return acc + at.weight; });
    }
    return 0.0;
  }

  double drift() const noexcept { return kind_ == FamilyKind::compound ? beta_ : 0.0; }

  /// Laplace exponent without any calibration check.
  double raw_psi(double lambda) const {
    if (!(lambda >= 0.0)) {
      throw domain_error("psi: lambda must be nonnegative");
    }
    switch (kind_) {
      case FamilyKind::poisson:
        return -c_ * std::expm1(-lambda);
      case FamilyKind::gamma:
        return a_ * std::log1p(lambda / b_);
      case FamilyKind::compound: {
        double v = beta_ * lambda;
        for (const auto& at : atoms_) {
          v += -at.weight * std::expm1(-lambda * at.location);
        }
        return v;
      }
    }
    return 0.0;
  }

  /// Scale every Levy-triple parameter by `factor` (psi is linear in the triple).
  SubordinatorFamily scaled(double factor) const {
    SubordinatorFamily f = *this;
    f.c_ *= factor;
    f.a_ *= factor;
    f.beta_ *= factor;
    for (auto& at : f.atoms_) {
      at.weight *= factor;
    }
    f.calibrated_ = false;
    return f;
  }

  friend bool operator==(const SubordinatorFamily& l, const SubordinatorFamily& r) {
    if (l.kind_ != r.kind_ || l.calibrated_ != r.calibrated_ || l.c_ != r.c_ || l.a_ != r.a_ ||
        l.b_ != r.b_ || l.beta_ != r.beta_ || l.atoms_.size() != r.atoms_.size()) {
      return false;
    }
    for (std::size_t i = 0; i < l.atoms_.size(); ++i) {
      if (l.atoms_[i].location != r.atoms_[i].location ||
          l.atoms_[i].weight != r.atoms_[i].weight) {
        return false;
      }
    }
    return true;
  }

 private:
  friend SubordinatorFamily calibrate(const SubordinatorFamily& family);

  SubordinatorFamily mark_calibrated() && {
    calibrated_ = true;
    return std::move(*this);
  }

  FamilyKind kind_ = FamilyKind::poisson;
  bool calibrated_ = false;
  bool degenerate_ = false;
  double c_ = 0.0;
  double a_ = 0.0;
  double b_ = 1.0;
  double beta_ = 0.0;
  std::vector<Atom> atoms_;
};

inline double psi(const SubordinatorFamily& family, double lambda) { return family.raw_psi(lambda); }

/// Rescale so that psi(1/2) = 1. Poisson and gamma kinds land on the
/// closed forms c = 1/(1 - e^{-1/2}) and a = 1/ln(1 + 1/(2b)).
inline SubordinatorFamily calibrate(const SubordinatorFamily& family) {
  if (family.calibrated()) {
    return family;
  }
  SubordinatorFamily out = family;
  switch (family.kind()) {
    case FamilyKind::poisson:
      out.c_ = -1.0 / std::expm1(-0.5);
      break;
    case FamilyKind::gamma:
      out.a_ = 1.0 / std::log1p(0.5 / family.b());
      break;
    case FamilyKind::compound: {
      const double half = family.raw_psi(0.5);
      if (!(half > 0.0)) {
        throw invalid_family("calibrate: psi(1/2) vanishes");
      }
      out = family.scaled(1.0 / half);
      break;
    }
  }
  out.calibrated_ = true;
  return out;
}

namespace detail {
inline void require_calibrated(const SubordinatorFamily& family, const char* op) {
  if (!family.calibrated()) {
    throw state_error(std::string(op) + ": family is not calibrated");
  }
}
}  // namespace detail

/// psi(1)/2; equals 1 only for the degenerate drift-only family.
inline double delta(const SubordinatorFamily& family) {
  detail::require_calibrated(family, "delta");
  return 0.5 * family.raw_psi(1.0);
}

/// Atom of G_sigma at r = 1, i.e. P[U_sigma = 0].
inline double gamma_atom(const SubordinatorFamily& family, double sigma) {
  if (!(sigma >= 1.0)) {
    throw domain_error("gamma_atom: sigma must be >= 1");
  }
  if (sigma == 1.0) {
    return 1.0;
  }
  if (family.drift() > 0.0 || family.kind() == FamilyKind::gamma) {
    return 0.0;
  }
  return std::exp(-family.levy_mass() * std::log(sigma));
}

/// E[R_sigma^lambda] = sigma^{-psi(lambda)}.
inline double laplace(const SubordinatorFamily& family, double sigma, double lambda) {
  if (!(sigma >= 1.0)) {
    throw domain_error("laplace: sigma must be >= 1");
  }
  return std::exp(-family.raw_psi(lambda) * std::log(sigma));
}

}  // namespace gaussmart
