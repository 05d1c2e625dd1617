#pragma once

#include <stdexcept>
#include <string>

namespace padic {

/// Raised when an exact value would need more digit positions than the
/// configured precision cap allows.
class precision_error : public std::overflow_error {
 public:
  explicit precision_error(const std::string& what) : std::overflow_error(what) {}
};

/// Raised when a computation would exceed a configured resource cap
/// (step count, enumeration size, rejection budget).
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace padic
