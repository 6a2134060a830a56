#pragma once

#include <stdexcept>
#include <string>

namespace cvqkd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix or vector has the wrong shape, or a partition does not fit it.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input matrix is not symmetric within tolerance.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix violates the uncertainty relation.
class UnphysicalStateError : public Error {
 public:
  using Error::Error;
};

/// A model or channel parameter violates one of its constraints. The message
/// always names the violated inequality so the CLI can print it as-is.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Beam-splitter model requested at a source gain where it is undefined.
class RegimeError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A 2-mode matrix is not of the form required by the no-switching protocol.
class ProtocolMismatchError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure that valid input can not produce.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvqkd
