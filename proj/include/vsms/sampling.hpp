#pragma once

#include <cstdint>
#include <cstddef>

namespace vsms {

/// Deterministic per-index random stream (splitmix64).
///
/// Every sample in a verification sweep draws from its own stream keyed by
/// (seed, index), so a budget split across any number of workers yields the
/// same values sample-for-sample as a sequential sweep.
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t index)
        : state_(mix(seed ^ 0x9E3779B97F4A7C15ull) ^ mix(index * 0xBF58476D1CE4E5B9ull + 1)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi].
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Uniform index in [0, n).
    std::size_t uniform_index(std::size_t n) {
        return n == 0 ? 0 : static_cast<std::size_t>(next_u64() % n);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace vsms
