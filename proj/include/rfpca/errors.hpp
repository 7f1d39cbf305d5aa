#pragma once

#include <stdexcept>

namespace rfpca {

// Bad user input: malformed files, shape mismatches, out-of-range options.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The reformulation's validity conditions do not hold for the requested
// (lambda, epsilon, k); the solver refuses to run.
struct condition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: non-PSD moments, square-root singularities,
// rank-deficient retractions.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rfpca
