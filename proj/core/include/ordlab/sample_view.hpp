// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

namespace ordlab {

// Non-owning view of n row-major d-vectors.
struct SampleView {
  const double* data = nullptr;
  std::size_t n = 0;
  std::size_t d = 0;

  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {data + i * d, d};
  }
  [[nodiscard]] bool empty() const { return n == 0; }
};

}  // namespace ordlab
