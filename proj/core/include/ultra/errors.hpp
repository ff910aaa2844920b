#pragma once

#include <stdexcept>
#include <string>

namespace ultra {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-square, asymmetric or otherwise mis-shaped input.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input carries no usable structure (zero spectrum, too few points, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A caller-supplied argument is out of range or inconsistent.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A requested label does not exist.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Data violates a domain rule (negative dissimilarity, inversion-prone
/// criterion, non-ultrametric input, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed, or a file is malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ultra
