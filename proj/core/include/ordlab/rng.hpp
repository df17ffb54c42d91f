// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace ordlab {

// 64-bit finalizer of the splitmix64 generator (Vigna / Stafford mix13).
// This is the documented mixing function used everywhere streams or
// sub-streams are derived.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

// Addressable random stream: (master_seed, stream_index) fully determines
// the sequence. Distinct indices under one master seed give statistically
// independent sequences; identical pairs reproduce bit-identical output
// regardless of how work is split across threads.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  // Hierarchical sub-stream derivation (per path, per grid cell, ...).
  // child(i) != child(j) for i != j up to 64-bit mixing collisions.
  [[nodiscard]] RngStream child(std::uint64_t i) const {
    return RngStream{master_seed, mix64(stream_index + kGolden64 * (i + 1))};
  }
};

// Counter-mode splitmix64 engine over one stream.
class RngEngine {
 public:
  explicit RngEngine(RngStream s)
      : state_(mix64(mix64(s.master_seed ^ 0x6A09E667F3BCC909ULL) + s.stream_index)) {}

  std::uint64_t next_u64() {
    state_ += kGolden64;
    return mix64(state_);
  }

  // Uniform on the open interval (0,1); never returns an exact endpoint,
  // so inverse-CDF transforms are safe.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via the inverse CDF (see normal_icdf in special.hpp);
  // one uniform maps monotonically to one normal, which keeps comonotone
  // couplings and common-random-number reuse exact.
  double normal();

  // exp(rate) waiting time.
  double exponential(double rate);

  // Poisson count; Knuth's product method below mean 10, Hoermann's PTRD
  // transformed rejection above.
  std::int64_t poisson(double mean);

 private:
  std::uint64_t state_;
};

// Deterministic block-parallel loop: body(i) must write only to slot i of
// pre-sized output storage. Results are independent of num_threads.
void parallel_for(std::size_t n, int num_threads, const std::function<void(std::size_t)>& body);

}  // namespace ordlab
