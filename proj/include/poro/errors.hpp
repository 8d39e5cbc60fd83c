#pragma once

#include <stdexcept>
#include <string>

namespace poro {

// Base class for all solver-side failures (as opposed to configuration errors).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton iteration diverged (growing residual or iteration cap).
struct DivergenceError : SolverError {
  using SolverError::SolverError;
};

// A kernel produced NaN/Inf; carries the offending cell when known.
struct NonFiniteResidualError : SolverError {
  explicit NonFiniteResidualError(const std::string& what, long cell = -1)
      : SolverError(what), cell_index(cell) {}
  long cell_index;
};

// Linear system factorization failed (structurally or numerically singular).
struct SingularMatrixError : SolverError {
  using SolverError::SolverError;
};

// Matrix/vector sizes disagree.
struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad or inconsistent user configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace poro
