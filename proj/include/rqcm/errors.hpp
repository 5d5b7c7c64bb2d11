#pragma once

#include <stdexcept>
#include <string>

namespace rqcm {

/// Base class for numerical failures (exit code 1 in the CLI).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that had to be positive semidefinite was not, beyond tolerance.
class NotPSD : public NumericalError {
 public:
  NotPSD(const std::string& what, double lambda_min)
      : NumericalError(what + " (lambda_min = " + std::to_string(lambda_min) + ")"),
        lambda_min_(lambda_min) {}
  double lambda_min() const noexcept { return lambda_min_; }

 private:
  double lambda_min_;
};

/// A matrix that had to be positive definite has a non-positive eigenvalue.
class NotPD : public NumericalError {
 public:
  NotPD(const std::string& what, double lambda_min)
      : NumericalError(what + " (lambda_min = " + std::to_string(lambda_min) + ")"),
        lambda_min_(lambda_min) {}
  double lambda_min() const noexcept { return lambda_min_; }

 private:
  double lambda_min_;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Argument outside the domain where a closed form is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent shapes, partitions or mode counts.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rqcm
