#pragma once

#include <stdexcept>
#include <string>

namespace qdiff {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical or physical validity domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested point lies below the threshold where the logarithmic
/// asymptote is defined (log argument <= 1).
class LogDomainError : public DomainError {
 public:
  LogDomainError(const std::string& what, double threshold)
      : DomainError(what), threshold_(threshold) {}
  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

/// lambda_T^2 q^2 >= 2: the quasi-equilibrium semiclassical picture breaks down.
class SemiclassicalDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Failure of a numerical procedure (as opposed to invalid input).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StiffnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The maximum of a sampled curve sits on the edge of the sampled range.
class HorizonError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Sampling too coarse for the requested derivative or grid operation.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qdiff
