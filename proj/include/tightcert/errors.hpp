#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tightcert {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition on a mathematical domain violated (r >= 0 for a negative
// expansion, non-positive k, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The slope r = 1 (equivalently r' = 0) is outside the construction.
class ExcludedSlopeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A contact coefficient of 0 admits no tight extension over the surgery torus.
class NoTightExtensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class NormalizationRequiredError : public Error {
 public:
  using Error::Error;
};

class MoveNotApplicableError : public Error {
 public:
  using Error::Error;
};

class NoExactTriangleError : public Error {
 public:
  using Error::Error;
};

// Internal consistency violated; reaching this is a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace tightcert
