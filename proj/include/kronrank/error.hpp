#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kronrank {

// Bad parameters or mismatched shapes.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A text file did not follow its format. Line and column are 1-based.
class ParseError : public InvalidArgument {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : InvalidArgument("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A computation would exceed a configured size or search budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an object would be larger than the materialization limit.
class MaterializationLimit : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

// A mathematical guarantee failed; indicates a bug, never bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kronrank
