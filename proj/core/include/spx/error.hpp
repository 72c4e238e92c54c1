#pragma once

#include <stdexcept>
#include <string>

namespace spx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimensions or lengths that do not fit an operation (non-power-of-two,
/// mismatched grids, matrix above the memory budget).
class SizeError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters: unknown methods, budgets out of range, bad models.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Calls that combine objects which must not be combined (mixed axes,
/// mismatched roles).
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace spx
