// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace htopos {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands do not fit together (different sites, wrong domains, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration exceeded its configured candidate budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Input violates an algebraic law (category axiom, naturality, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// Positioned error raised by the document parser.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Lookup of an unknown name (builtin site, entity, suite, ...).
class UnknownNameError : public Error {
 public:
  using Error::Error;
};

/// Invariant of the library itself broken; indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace htopos
