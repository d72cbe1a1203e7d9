#pragma once

#include <stdexcept>
#include <string>

namespace liekahler {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A queried point where s(a) is singular or badly conditioned.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// Series truncation, eigensolver or step-halving failures.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the supported domain (exp overflow bound, scaling radius).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Finite differences dominated by rounding (residual grows as h shrinks).
class CancellationError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace liekahler
