#pragma once

#include <stdexcept>
#include <string>

namespace motifmine {

// Raised when inputs violate an operation's preconditions (bad sizes,
// probabilities outside [0,1], malformed files). The CLI maps these to exit 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A topology/size combination that cannot be built.
class InvalidSize : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Failures that happen while running (divergence, budget caps). CLI exit 3.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
};

}  // namespace motifmine
