#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qcm {

/// Base of every exception thrown by the library. The CLI maps these to exit
/// code 2; ConfigError maps to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a gauge function or operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Cantor construction with overlapping intervals (lambda_{m-1} <= 2 lambda_m).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Requested generation exceeds the depth of a complex or model.
class DepthError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for the desk-scale caps (cells, dense matrices).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A weight sequence is shorter than the spectrum it is applied to.
class InsufficientWeightsError : public Error {
 public:
  using Error::Error;
};

/// Weight sequence is not nonincreasing where it must be.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

/// Search exhausted its horizon.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

class LengthError : public Error {
 public:
  using Error::Error;
};

class EmptySelectionError : public Error {
 public:
  using Error::Error;
};

/// Configuration rejected. Carries every validation problem, each prefixed
/// with the JSON path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace qcm
