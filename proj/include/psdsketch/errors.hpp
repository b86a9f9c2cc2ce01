#pragma once

#include <stdexcept>
#include <string>

namespace psdsketch {

/// Bad input: parameters out of range, malformed files, invariant violations.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown that survived the retry policy (singular systems,
/// rank-deficient sketches, non-PSD input where PSD is required).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotPsdError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace psdsketch
