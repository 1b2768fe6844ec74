#pragma once

#include <stdexcept>
#include <string>

namespace flowpotts {

// Bad argument to an operation: wrong lengths, x == y, loops where forbidden.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured enumeration or size cap would be exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A lemma or theorem hypothesis does not hold for the given instance.
class PreconditionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal consistency failure (e.g. non-integral interpolation).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace flowpotts
