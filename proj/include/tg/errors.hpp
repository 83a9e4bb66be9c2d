#pragma once

#include <stdexcept>
#include <string>

namespace tg {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: words, group files, vertex strings.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A definition violates a structural condition (transitivity, kernels, gcd, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation exceeded its configured cap.
class ResourceBound : public Error {
 public:
  using Error::Error;
};

/// Operands live on incompatible trees or alphabets.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace tg
