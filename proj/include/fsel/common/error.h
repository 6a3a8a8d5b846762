#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsel {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Pointwise evaluation of the drift at its singularity.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An operation declined to run because its statistical or data
/// preconditions are not met (too few samples, short history, ...).
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point breakdown (non positive-definite covariance, NaN, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No parameter set satisfies the requested constraints. `binding` names the
/// constraints that could not be met.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<std::string> binding = {})
      : std::runtime_error(what), binding_(std::move(binding)) {}

  const std::vector<std::string>& binding() const noexcept { return binding_; }

 private:
  std::vector<std::string> binding_;
};

class IntegrationError : public NumericError {
 public:
  IntegrationError(std::size_t step, const std::string& what)
      : NumericError(what + " at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace fsel
