#pragma once

#include <stdexcept>
#include <string>

namespace amulab {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters, malformed descriptors, broken invariants on input.
// The CLI maps this to exit code 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

// A scalar function was evaluated outside its declared domain.
class DomainError : public Error {
public:
  using Error::Error;
};

// Numerical kernel failure (eigensolver non-convergence and similar).
class NumericalError : public Error {
public:
  using Error::Error;
};

// File system / serialization failure. The CLI maps this to exit code 3.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace amulab
