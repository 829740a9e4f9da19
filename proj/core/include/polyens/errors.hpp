#pragma once

#include <stdexcept>
#include <string>

namespace polyens {

/// Violated input contract (non-square matrix, coincident points, y on the
/// real axis, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A quadrature or series failed its self-convergence gate. No value is
/// returned in that case; callers see this instead.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace polyens
