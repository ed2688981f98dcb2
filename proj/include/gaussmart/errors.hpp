#pragma once

#include <stdexcept>
#include <string>

namespace gaussmart {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Family parameters that cannot describe a log-convolution semigroup.
class invalid_family : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation requires a calibrated family.
class state_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Operation exists only for some family kinds.
class unsupported_family : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Quadrature did not reach its error target; carries the estimate.
class numeric_failure : public std::runtime_error {
 public:
  numeric_failure(const std::string& what, double estimate)
      : std::runtime_error(what + " (error estimate " + std::to_string(estimate) + ")"),
        estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

}  // namespace gaussmart
