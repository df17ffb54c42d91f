// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ordlab {

// Raised when a quadrature, root find or sampler self-check fails to reach
// its target accuracy. The message carries the diagnostic (achieved error,
// interval, iteration count).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an exact oracle would exceed its enumeration budget
// (support too large, state space blowup).
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the bracketing root finder when the target is not enclosed.
class no_solution_error : public std::runtime_error {
 public:
  explicit no_solution_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ordlab
