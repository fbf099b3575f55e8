#pragma once

#include <stdexcept>
#include <string>

namespace koreg {

/// Bad input: malformed data, violated preconditions, unusable configuration.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coordinate descent ran out of sweeps at a given penalty.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(double lambda, long iterations, const std::string& what)
      : NumericalError(what), lambda_(lambda), iterations_(iterations) {}

  double lambda() const noexcept { return lambda_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double lambda_;
  long iterations_;
};

/// lambda_max is zero: the response carries no first-order signal along any column.
class DegenerateGridError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace koreg
