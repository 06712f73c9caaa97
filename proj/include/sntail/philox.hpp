// SPDX-License-Identifier: Apache-2.0
//
// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every draw is
// a pure function of (key, counter), so a simulation indexed by
// (seed, trial, coordinate) is reproducible under any work partition.
#pragma once

#include <array>
#include <cstdint>

namespace sntail::mc {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten rounds of the Philox4x32 bijection.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Uniform on (0, 1) from the top 52 bits plus a half step, never exactly 0 or 1.
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

/// Stream of uniforms addressed by (seed, trial, index).
class CounterStream {
public:
  explicit CounterStream(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  /// Two independent 64-bit words for block `block` of trial `trial`.
  std::array<std::uint64_t, 2> block(std::uint64_t trial, std::uint32_t block) const {
    const PhiloxCounter out = philox4x32_10(
        {block, 0u, static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)}, key_);
    return {(std::uint64_t{out[1]} << 32) | out[0], (std::uint64_t{out[3]} << 32) | out[2]};
  }

private:
  PhiloxKey key_;
};

}  // namespace sntail::mc
