#pragma once

#include <stdexcept>
#include <string>

namespace groupeq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries a 1-based line/column when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) +
                              (column == 0 ? "" : ", column " + std::to_string(column)) + ": " +
                              what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A multiplication table or map failed the group (homomorphism) axioms.
class AxiomError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap would be exceeded. Never silently truncated.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace groupeq
