#pragma once

#include <stdexcept>

namespace fceval {

// Argument outside the stated domain of a loss generator or moment map.
// Thrown instead of letting NaN propagate into downstream statistics.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Invalid model / distribution / experiment parameters.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data (CSV parse failures, empty panels...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fceval
