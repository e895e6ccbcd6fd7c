#pragma once

#include <stdexcept>
#include <string>

namespace fogplan {

enum class ErrorKind {
  Syntax,             // malformed token or clause
  UnknownFunctor,     // functor outside the accepted fact vocabulary
  ArityMismatch,      // known functor with the wrong argument count
  DuplicateKey,       // same fact key declared twice
  DanglingReference,  // fact refers to an undeclared service or node
  InvalidValue,       // value outside its admissible range
  EmptyScript,        // event script with no event and no query
  Structural,         // placement or query built from inconsistent parts
  Reference,          // operation names an undeclared endpoint
  UnknownId,          // lookup of an id that is not registered
  BoundExceeded,      // exhaustive enumeration larger than the safety bound
  Io,                 // file could not be read or written
  Internal            // broken internal invariant, always a bug
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// Parse failure carrying the 1-based source position of the offending token.
class ParseError : public Error {
public:
  ParseError(ErrorKind kind, const std::string& message, int line, int column)
      : Error(kind, message + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  int line_;
  int column_;
};

}  // namespace fogplan
