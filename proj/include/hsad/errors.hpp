#pragma once

#include <stdexcept>

namespace hsad {

/// Malformed shapes, mismatched operands, invalid scalar arguments.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or inconsistent external data (files, headers, masks).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown: non-finite iterates, factorization failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsad
