#pragma once

#include <stdexcept>
#include <string>

namespace cheegerlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition or malformed configuration (CLI exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A solver failed to reach its stopping criterion (CLI exit code 1).
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace cheegerlab
