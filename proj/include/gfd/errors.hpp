// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gfd {

/// Unusable option value or parameter combination. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input data that cannot be processed. CLI exit code 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File missing or unreadable.
struct FileError : DataError {
  using DataError::DataError;
};

/// File exists but its content does not parse.
struct ParseError : DataError {
  using DataError::DataError;
};

/// Requested channel index does not exist in the file.
struct ChannelError : DataError {
  using DataError::DataError;
};

/// Series has too few extrema to build upper/lower envelopes.
struct MonotoneSignalError : DataError {
  using DataError::DataError;
};

/// Identically zero series handed to the sifting step.
struct DegenerateInputError : DataError {
  using DataError::DataError;
};

/// Cosine similarity requested against a zero-norm vector.
struct UndefinedCosineError : DataError {
  using DataError::DataError;
};

/// Dual solver hit its pass cap before KKT conditions were met.
/// CLI exit code 4.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double kkt_violation)
      : std::runtime_error(what), kkt_violation_(kkt_violation) {}

  double kkt_violation() const { return kkt_violation_; }

 private:
  double kkt_violation_;
};

}  // namespace gfd
