#pragma once

#include <stdexcept>
#include <string>

namespace xxz {

/// Invalid argument or precondition violation (bad site index, odd N, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured size cap (full-space sites, sector dimension, grid points) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: non-convergence, unresolved degeneracy, unreachable target.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateGroundError : public NumericError {
 public:
  explicit DegenerateGroundError(const std::string& what) : NumericError(what) {}
};

}  // namespace xxz
