#pragma once

#include <stdexcept>
#include <string>

namespace pddlego {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed PDDL text. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnsupportedRequirement : public Error {
 public:
  using Error::Error;
};

/// An edit that cannot be decoded; the agent retries the translator on it.
class MalformedDelta : public Error {
 public:
  using Error::Error;
};

class RenameCollision : public Error {
 public:
  using Error::Error;
};

class UndeclaredObject : public Error {
 public:
  using Error::Error;
};

class GroundingExplosion : public Error {
 public:
  using Error::Error;
};

/// A plan step references two locations without a `connected` fact.
class MissingDirection : public Error {
 public:
  using Error::Error;
};

class UnrecognizedObservation : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class ModelRefusal : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A request that violates its documented precondition; raised before any I/O.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class IncomparableSuites : public Error {
 public:
  using Error::Error;
};

}  // namespace pddlego
