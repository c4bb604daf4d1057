#pragma once

#include <stdexcept>
#include <string>

namespace wmx {

// Base of every error the library throws on contract violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or range metadata of two operands disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A bit vector has the wrong length for the operation.
class LengthError : public Error {
 public:
  using Error::Error;
};

// The image cannot host the configured number of carrier slots.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters, names or file contents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace wmx
