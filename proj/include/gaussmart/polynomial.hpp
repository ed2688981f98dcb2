#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gaussian.hpp"

namespace gaussmart {

/// Real polynomial of degree at most `max_degree`; coefficients()[k] multiplies x^k.
class Polynomial {
 public:
  static constexpr int max_degree = 8;

  Polynomial() : coef_{0.0} {}
  Polynomial(std::initializer_list<double> coefficients) : Polynomial(std::vector<double>(coefficients)) {}
  explicit Polynomial(std::vector<double> coefficients) : coef_(std::move(coefficients)) {
    if (coef_.empty()) {
      coef_.push_back(0.0);
    }
    for (double c : coef_) {
      if (!std::isfinite(c)) {
        throw domain_error("polynomial coefficients must be finite");
      }
    }
    while (coef_.size() > 1 && coef_.back() == 0.0) {
      coef_.pop_back();
    }
    if (degree() > max_degree) {
      throw domain_error("polynomial degree exceeds " + std::to_string(max_degree));
    }
  }

  static Polynomial monomial(int n) {
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c.back() = 1.0;
    return Polynomial(std::move(c));
  }

  int degree() const noexcept { return static_cast<int>(coef_.size()) - 1; }
  std::span<const double> coefficients() const noexcept { return coef_; }

  double operator()(double x) const {
    double v = 0.0;
    for (auto it = coef_.rbegin(); it != coef_.rend(); ++it) {
      v = v * x + *it;
    }
    return v;
  }

  Polynomial derivative() const {
    if (coef_.size() == 1) {
      return Polynomial{};
    }
    std::vector<double> d(coef_.size() - 1);
    for (std::size_t k = 1; k < coef_.size(); ++k) {
      d[k - 1] = static_cast<double>(k) * coef_[k];
    }
    return Polynomial(std::move(d));
  }

  /// E[p(W)] for W ~ N(mean, variance).
  double gaussian_expectation(double mean, double variance) const {
    const auto m = normal_raw_moments(mean, variance, degree());
    double v = 0.0;
    for (std::size_t k = 0; k < coef_.size(); ++k) {
      v += coef_[k] * m[k];
    }
    return v;
  }

 private:
  std::vector<double> coef_;
};

}  // namespace gaussmart
