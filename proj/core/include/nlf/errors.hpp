#pragma once

#include <stdexcept>
#include <string>

namespace nlf {

// Error taxonomy shared by all modules. The CLI maps these onto exit codes:
//   ValidationError (and subclasses) -> 2
//   NonconvergenceError              -> 3
//   InvariantViolationError          -> 4
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs: malformed configs, preconditions, out-of-domain arguments.
struct ValidationError : Error {
  using Error::Error;
};

struct DomainError : ValidationError {
  using ValidationError::ValidationError;
};

// Integral does not converge (tail rate too slow, mu outside window, ...).
struct DivergenceError : ValidationError {
  using ValidationError::ValidationError;
};

// Grid mismatch between operands (spacing, alignment).
struct GridError : ValidationError {
  using ValidationError::ValidationError;
};

// A diagnostic could not be computed (no level crossing, band unpopulated).
struct DiagnosticError : ValidationError {
  using ValidationError::ValidationError;
};

// Iterative solver failed to converge, or a front left its window.
struct NonconvergenceError : Error {
  using Error::Error;
};

struct WindowError : NonconvergenceError {
  using NonconvergenceError::NonconvergenceError;
};

// A mathematically impossible outcome was produced (solver bug signal).
struct InvariantViolationError : Error {
  using Error::Error;
};

}  // namespace nlf
