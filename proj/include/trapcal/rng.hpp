#pragma once

#include <cstdint>
#include <random>

namespace trapcal {

// splitmix64; used to derive independent substreams from (seed, tags) so
// parallel generation stays deterministic regardless of scheduling.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t index = 0) {
    return std::mt19937_64(mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) ^ mix64(tag) ^
                                 mix64(index + 0x14057b7ef767814fULL)));
}

// Polar Box-Muller; avoids libstdc++-specific normal_distribution state.
inline double gaussian(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (;;) {
        const double u = uni(rng), v = uni(rng);
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

}  // namespace trapcal
