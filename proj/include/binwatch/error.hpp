#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace binwatch {

/// Invalid configuration or contract violation by the caller. CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be processed. CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed row in an input file; `row()` is 1-based and counts the header.
class ParseError : public DataError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// A model could not be fitted (e.g. rank-deficient design).
class FitError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace binwatch
