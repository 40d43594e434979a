#pragma once

#include <stdexcept>
#include <string>

namespace ballmapper {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on arguments was violated (bad dimension, eps <= 0, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A points or values file could not be parsed. The message names row/column.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The requested backend cannot evaluate the cloud's metric.
class UnsupportedMetric : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its configured budget.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// An object was used in a state that does not permit the call.
class InvalidState : public Error {
 public:
  using Error::Error;
};

}  // namespace ballmapper
