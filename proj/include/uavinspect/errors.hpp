#pragma once

#include <stdexcept>
#include <string>

namespace uavinspect {

/// Malformed mesh or config input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Geometry that cannot be processed (zero-area facet, vanishing vertex normal, ...).
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A safety property of the closed loop was violated (agent on a target, agents overlapping).
class SafetyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or non-finite state; indicates a bug in the caller.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace uavinspect
