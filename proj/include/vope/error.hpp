#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vope {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic domain violation: division by zero, evaluation at a pole,
/// unbound parameter, mixing parameters of unrelated algebras.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid algebra data (duplicate generator, weight-inconsistent OPE entry,
/// failed Lie-data identity, unknown generator).
class AlgebraError : public Error {
 public:
  using Error::Error;
};

/// Rewriting did not finish within the configured step budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The truncated module is too small for the requested mode computation.
class CutoffError : public Error {
 public:
  using Error::Error;
};

/// Syntax or semantic error in DSL input, with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace vope
