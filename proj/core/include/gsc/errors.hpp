#pragma once

#include <stdexcept>
#include <string>

namespace gsc {

/// Invalid argument combination (bad cardinality, inconsistent bit allocation, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mathematical domain violation (zero-norm constellation, 1 + c*phi <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Shapes that do not match (quadrature dimension vs. constellation dimension).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation only defined for a subset of dimensionalities (kurtosis model: one pair only).
class UnsupportedDimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace gsc
