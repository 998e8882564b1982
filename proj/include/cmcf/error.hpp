#pragma once

#include <stdexcept>
#include <string>

namespace cmcf {

// Raised when an input violates a documented precondition. The CLI maps it to
// exit code 2.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a numerical procedure cannot produce a valid result
// (e.g. a front self-intersects).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

}  // namespace cmcf
