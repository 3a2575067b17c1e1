#pragma once

#include <stdexcept>
#include <string>

namespace robreg {

/// Invalid parameters, malformed input files, violated preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vector/matrix sizes that do not agree.
class DimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Text input that cannot be parsed (CSV, JSON, grid specs).
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Non-finite objectives, singular systems and similar failures of the numerics.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace robreg
