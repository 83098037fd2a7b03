// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>

namespace trom {

/// splitmix64 finalizer; a stateless hash of a 64-bit counter.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from 53 high-quality bits.
[[nodiscard]] constexpr double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Counter-based uniform: the value depends only on (seed, stream, index),
/// so results do not depend on evaluation order.
[[nodiscard]] constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return to_unit(mix64(mix64(seed ^ mix64(stream)) + index));
}

/// Sequential generator with the same mixing function.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}
    constexpr std::uint64_t next() {
        const std::uint64_t z = mix64(state_);
        state_ += 0x9E3779B97F4A7C15ull;
        return z;
    }
    constexpr double uniform() { return to_unit(next()); }
    constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

}  // namespace trom
