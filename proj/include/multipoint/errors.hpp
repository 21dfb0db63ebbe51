#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace multipoint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed polynomial text. `position()` is a 0-based byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownVariableError : public ParseError {
 public:
  UnknownVariableError(const std::string& name, std::size_t position)
      : ParseError("unknown variable '" + name + "'", position), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Operands live in different variable tables, or a vector has the wrong length.
class TableMismatchError : public Error {
 public:
  using Error::Error;
};

/// Exact division failed; carries the offending monomial in rendered form.
class NotDivisibleError : public Error {
 public:
  NotDivisibleError(const std::string& divisor, const std::string& monomial)
      : Error("polynomial is not divisible by " + divisor + ": offending monomial " + monomial),
        monomial_(monomial) {}

  const std::string& monomial() const noexcept { return monomial_; }

 private:
  std::string monomial_;
};

/// Invalid user-supplied data (bad covering collection, bad parameter count, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A condition the library guarantees internally was violated.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace multipoint
