#pragma once

#include <stdexcept>
#include <string>

namespace qes {

/// Caller violated a documented precondition (bad degree, tag mismatch, ...).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numeric procedure failed to meet its contract (non-convergence,
/// clustered roots, step-size collapse).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qes
