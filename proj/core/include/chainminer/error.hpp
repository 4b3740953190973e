#pragma once

#include <stdexcept>
#include <string>

namespace chainminer {

// Base for everything the library throws on purpose. Catch sites key exit
// codes off the concrete subtype.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed us an argument outside the documented domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// The network definition itself is broken: cycles, missing or malformed
// tables, bad state lists.
class StructureError : public Error {
 public:
  using Error::Error;
};

// Text does not conform to the grammar. line/column are 1-based and point at
// the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", col " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Conditioning on an event of probability zero. Distinct from a conditional
// that evaluates to zero, which is an ordinary result.
class ZeroEvidenceError : public Error {
 public:
  using Error::Error;
};

// A statistic was requested over an empty collection.
class EmptySetError : public Error {
 public:
  using Error::Error;
};

}  // namespace chainminer
