#pragma once

#include <stdexcept>
#include <string>

namespace tadist {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: wrong sizes, empty boundary, bad index.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A mass precondition was violated (unequal masses, mass above one, ...).
class MassError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation (negative time, p < 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The numerical backend failed to produce a certified answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace tadist
