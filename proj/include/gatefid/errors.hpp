#pragma once

#include <stdexcept>
#include <string>

namespace gatefid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not chain (wrong size, non-square, dims mismatch).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A matrix failed a numerical precondition (Hermiticity, PSD, unitarity,
/// trace preservation) or an iterative routine failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input. The message names the offending field.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace gatefid
