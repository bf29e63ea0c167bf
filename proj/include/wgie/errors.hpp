#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace wgie {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// F(t2) - F(t1) is zero (or below representable mass) for the model.
class DegenerateWindowError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An operation that needs alpha + beta != 2 was called on the boundary.
class RegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Not enough observations for a fit.
class InsufficientDataError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical kernel failed; carries whatever it had when it gave up.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what,
                 double best_estimate = std::numeric_limits<double>::quiet_NaN(),
                 double error_bound = std::numeric_limits<double>::infinity())
      : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

/// An entropy integral that does not exist (heavy tail, log divergence).
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace wgie
