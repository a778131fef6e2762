#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace vsi {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed textual input (expressions, JSON files).  Carries a byte offset
/// into the offending string when one is known; offset() < 0 means "unknown".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long offset = -1)
      : Error(offset >= 0 ? what + " (at byte " + std::to_string(offset) + ")" : what),
        offset_(offset) {}
  long offset() const { return offset_; }

 private:
  long offset_;
};

/// Structurally well-formed input that violates a semantic precondition
/// (wrong dimensions, invalid frame, out-of-domain parameter, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Work refused because it would exceed a configured resource cap
/// (component-count cap, degree cap, enumeration cap).
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a pole: a denominator vanished at the requested point.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A broken internal invariant, i.e. a bug trap.  Never caused by user input.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Throws InternalError when an internal invariant fails.
inline void internal_check(bool ok, const std::string& what) {
  if (!ok) throw InternalError("internal invariant violated: " + what);
}

/// Component-count cap for curvature stacks.  The environment variable
/// VSI_COMPONENT_CAP overrides the built-in default of 10^7 scalar slots.
inline long long default_component_cap() {
  if (const char* env = std::getenv("VSI_COMPONENT_CAP")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 10'000'000LL;
}

}  // namespace vsi
