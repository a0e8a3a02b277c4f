#pragma once

#include <stdexcept>
#include <string>

namespace bma {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distribution or model parameter is outside its valid domain.
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperationError : public Error {
 public:
  using Error::Error;
};

/// Data cannot identify the requested quantity (zero variance, too few values).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

/// Non-finite inputs reached a likelihood or integral.
class NumericDomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature hit its subdivision limit before meeting tolerance.
/// Carries the interval with the largest remaining error estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}
  double bracket_lower() const noexcept { return lower_; }
  double bracket_upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class EmptyTrainingError : public Error {
 public:
  using Error::Error;
};

/// Every model in an ensemble has zero marginal likelihood.
class DegenerateEvidenceError : public Error {
 public:
  using Error::Error;
};

/// Too many comparisons of a corpus failed to evaluate.
class CorpusFailureError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input; line is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bma
