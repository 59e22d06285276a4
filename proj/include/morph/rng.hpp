#pragma once

#include <cstdint>

namespace morph {

/// Counter-based random stream: value i of stream (seed) is a pure function
/// of (seed, i), so parallel sweeps produce the same draws in any schedule.
inline std::uint64_t hash_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_u64(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
    return hash_mix(hash_mix(seed ^ (0xda942042e4dd58b5ull * lane)) + index);
}

/// Uniform double in [0, 1).
inline double counter_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
    return static_cast<double>(counter_u64(seed, index, lane) >> 11) * 0x1.0p-53;
}

/// Small sequential generator for scenario initialization.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return hash_mix(state_);
    }
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace morph
