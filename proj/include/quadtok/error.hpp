#pragma once

#include <stdexcept>
#include <string>

namespace quadtok {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Bytes were readable but not a valid PNG/JPEG stream.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// A rectangle or coordinate falls outside the raster or grid it indexes.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition (bad dimensions, mismatched sizes, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Serialized record could not be parsed or has an unsupported schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace quadtok
