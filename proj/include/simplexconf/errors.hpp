#pragma once

#include <stdexcept>
#include <string>

namespace simplexconf {

// Error taxonomy mirrors the CLI exit codes:
//   ConfigError/ParseError -> 2, FitError -> 3, NumericError -> 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Singular design matrix detected before/after optimization.
struct RankError : FitError {
    using FitError::FitError;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument to a numeric routine (non-positive shape, probability
// outside [0,1], boundary simplex point, ...).
struct DomainError : NumericError {
    using NumericError::NumericError;
};

// Root finder was handed an interval without a sign change.
struct BracketError : NumericError {
    using NumericError::NumericError;
};

// Iteration cap exceeded in an iterative numeric routine.
struct ConvergenceError : NumericError {
    using NumericError::NumericError;
};

}  // namespace simplexconf
