#pragma once

#include <stdexcept>
#include <string>

namespace qanneal {

/// Precondition or input-format violation (parity mismatch, bad level file, t <= 0, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem size exceeds an enumeration or dense-linear-algebra cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A numerical invariant was violated at run time (norm drift, step underflow,
/// failed verification check).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qanneal
