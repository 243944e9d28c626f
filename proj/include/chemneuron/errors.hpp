#pragma once

#include <stdexcept>
#include <string>

namespace chemneuron {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values (bad channel count, negative rate, ...).
/// The message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Failure while parsing a network document. Carries the 1-based
/// line/column of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column)
      : Error(std::move(message)), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Runtime failure of a simulation (step-size underflow, step budget
/// exhausted, event applied at a past time).
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace chemneuron
