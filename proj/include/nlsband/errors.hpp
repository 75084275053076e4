#pragma once

#include <stdexcept>
#include <string>

namespace nlsband {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Request for a band quantity outside the open energy band.
class OutOfBandError : public Error {
 public:
  OutOfBandError(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

enum class Constraint { BPositive, APlusBPositive, C1SquaredPositive };

inline const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::BPositive: return "B > 0";
    case Constraint::APlusBPositive: return "A + B > 0";
    case Constraint::C1SquaredPositive: return "C1^2 > 0";
  }
  return "?";
}

/// The quantization constraint block failed at the requested modulus.
class ConstraintViolation : public DomainError {
 public:
  ConstraintViolation(Constraint which, double value)
      : DomainError(std::string("constraint violated: ") + to_string(which) +
                    " (value " + std::to_string(value) + ")"),
        which_(which),
        value_(value) {}
  Constraint which() const { return which_; }
  double value() const { return value_; }

 private:
  Constraint which_;
  double value_;
};

class NotImplementedError : public Error {
 public:
  using Error::Error;
};

/// Internal numerical failure: bracket lost, refinement budget exhausted.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class OracleError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace nlsband
