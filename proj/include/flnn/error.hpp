#pragma once

#include <stdexcept>
#include <string>

namespace flnn {

/// Caller passed malformed arguments (dimension mismatch, non-finite values).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent or incomplete configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dataset ingestion failures. `row()` is the 1-based source line, 0 when
/// not row-specific.
class DataError : public std::runtime_error {
 public:
  enum class Kind { unreadable, arity, malformed, value, empty };

  DataError(Kind kind, const std::string& what, std::size_t row = 0)
      : std::runtime_error(row ? what + " (line " + std::to_string(row) + ")" : what),
        kind_(kind),
        row_(row) {}
  Kind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }

 private:
  Kind kind_;
  std::size_t row_;
};

/// A trainer or optimizer hit a non-finite objective.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flnn
