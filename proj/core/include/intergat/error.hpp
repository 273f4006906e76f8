#pragma once

#include <stdexcept>
#include <string>

namespace intergat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed or missing input files.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Data that cannot be normalized or windowed (constant signal, too short).
class DataError : public Error {
 public:
  using Error::Error;
};

/// API misuse: bad arguments, out-of-range counts, gradients that were never recorded.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or an iteration that failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; the message starts with the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A checkpoint that does not match the dataset or lacks required content.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace intergat
