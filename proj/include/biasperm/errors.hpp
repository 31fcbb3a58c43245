#pragma once

#include <stdexcept>
#include <string>

namespace biasperm {

/// Malformed input: bad labels, out-of-range probabilities, size mismatches.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state space or enumeration would exceed the configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Signals a bug, not bad input.
class SoundnessFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace biasperm
