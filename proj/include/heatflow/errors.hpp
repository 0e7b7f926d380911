#pragma once

#include <stdexcept>
#include <string>

namespace heatflow {

// Domain errors: the input is outside an operation's contract.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ZeroPolynomial : public DomainError {
 public:
  ZeroPolynomial() : DomainError("polynomial is identically zero") {}
};

class OddDegree : public DomainError {
 public:
  explicit OddDegree(int degree)
      : DomainError("polynomial has odd degree " + std::to_string(degree) +
                    "; it is unbounded below") {}
};

class NegativeLeading : public DomainError {
 public:
  NegativeLeading()
      : DomainError("leading coefficient is not positive; polynomial is unbounded below") {}
};

class WrongDegree : public DomainError {
 public:
  WrongDegree(int expected, int got)
      : DomainError("expected degree " + std::to_string(expected) + ", got " +
                    std::to_string(got)) {}
};

class NonpositiveWidth : public DomainError {
 public:
  NonpositiveWidth() : DomainError("smoothing width must be positive") {}
};

class DegenerateLeading : public DomainError {
 public:
  DegenerateLeading() : DomainError("leading x-coefficient vanishes identically in t") {}
};

class DegenerateDenominator : public DomainError {
 public:
  DegenerateDenominator() : DomainError("merge-abscissa formula has a vanishing denominator") {}
};

class NotAMergeTime : public DomainError {
 public:
  explicit NotAMergeTime(double t)
      : DomainError("t = " + std::to_string(t) + " is not a root of the merge discriminant") {}
};

class NotApplicable : public DomainError {
 public:
  using DomainError::DomainError;
};

class StartOnSingularity : public DomainError {
 public:
  StartOnSingularity(double x, double t)
      : DomainError("trajectory starts on the inflection set at x = " + std::to_string(x) +
                    ", t = " + std::to_string(t)) {}
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when two independently computed answers disagree; always a bug.
class ConsistencyViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace heatflow
