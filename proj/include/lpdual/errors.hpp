#pragma once

#include <stdexcept>
#include <string>

namespace lpdual {

/// Violated precondition or malformed input. CLI exit code 2.
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// Requested object is too large to materialize (e.g. 2^n atoms for n > 12).
class ResourceError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// ran(S) is not contained in dom(T) within tolerance.
class CompositionError : public ContractError {
 public:
  CompositionError(const std::string& what, double max_residual)
      : ContractError(what), max_residual_(max_residual) {}
  double max_residual() const noexcept { return max_residual_; }

 private:
  double max_residual_;
};

/// The operator does not act as the identity outside the designated atoms.
class NotIdentitySummandError : public ContractError {
 public:
  NotIdentitySummandError(const std::string& what, double max_deviation)
      : ContractError(what), max_deviation_(max_deviation) {}
  double max_deviation() const noexcept { return max_deviation_; }

 private:
  double max_deviation_;
};

/// Numerical failure inside the LP solver. CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lpdual
