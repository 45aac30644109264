#ifndef PERRON_ERRORS_HPP
#define PERRON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace perron {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched or invalid sizes, spacings, argument ranges.
class InvalidArgumentError : public Error {
public:
  using Error::Error;
};

class DimensionError : public InvalidArgumentError {
public:
  using InvalidArgumentError::InvalidArgumentError;
};

// A vector that must be (strictly) positive is not, or a solve produced
// entries below the positivity tolerance.
class PositivityError : public Error {
public:
  using Error::Error;
};

// Exactly singular matrix handed to a factorization.
class SingularMatrixError : public Error {
public:
  using Error::Error;
};

// Shifted system (lambda - op) is singular or indefinite where it must be
// definite: the shift collided with the spectrum. Carries the shift.
class ShiftCollisionError : public Error {
public:
  ShiftCollisionError(const std::string& msg, double lambda)
      : Error(msg), lambda_(lambda) {}
  double shift() const { return lambda_; }

private:
  double lambda_;
};

// Fixed-shift iteration detected shift <= principal eigenvalue.
class ShiftTooSmallError : public Error {
public:
  using Error::Error;
};

// Interior nodes of a grid domain do not form one 4-connected component.
class ConnectivityError : public Error {
public:
  using Error::Error;
};

// Structurally empty or otherwise unusable domain / data.
class DomainError : public Error {
public:
  using Error::Error;
};

// Text input that could not be parsed; carries a 1-based line number
// (0 when no line applies).
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line) : Error(msg), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// Iteration state lacks a field the requested operation needs.
class StateError : public Error {
public:
  using Error::Error;
};

// Stopping rule not meaningful for the algorithm (e.g. ratio-gap criteria
// for Rayleigh iterates that need not stay positive).
class UnsupportedCriterionError : public Error {
public:
  using Error::Error;
};

// Too few data points for an estimate.
class InsufficientDataError : public Error {
public:
  using Error::Error;
};

// An iteration exhausted its step budget without meeting its target.
class NoConvergenceError : public Error {
public:
  using Error::Error;
};

}  // namespace perron

#endif
