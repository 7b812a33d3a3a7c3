#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something that violates a precondition. Maps to CLI exit
/// code 2 and HTTP 400.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed dataset file. Row and column are 1-based; column 0 means the
/// whole row.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, std::size_t row, std::size_t column)
      : ValidationError(format(message, row, column)), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t row, std::size_t column) {
    std::string where = "row " + std::to_string(row);
    if (column != 0) where += ", column " + std::to_string(column);
    return where + ": " + message;
  }

  std::size_t row_;
  std::size_t column_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Optimistic-concurrency or staleness failure (expected version mismatch,
/// purity report computed from another dataset version).
class ConflictError : public Error {
 public:
  using Error::Error;
};

}  // namespace glc
