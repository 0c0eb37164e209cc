#pragma once

#include <stdexcept>
#include <string>

namespace qgen {

/// Malformed or missing input data (CSV files, dataset contents).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine produced a non-finite or inconsistent result.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qgen
