#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace congen {

// Stream labels for deriving independent RNG streams from one master seed.
// Parallel chains get disjoint streams by passing a distinct index.
namespace stream {
inline constexpr std::uint64_t positions = 1;
inline constexpr std::uint64_t initial_graph = 2;
inline constexpr std::uint64_t connect = 3;
inline constexpr std::uint64_t chain = 4;
inline constexpr std::uint64_t line_picking = 5;
inline constexpr std::uint64_t sweep = 6;
inline constexpr std::uint64_t rejection = 7;
}  // namespace stream

// splitmix64 finalizer; good avalanche for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-seeded engine: (seed, stream, index) -> reproducible generator.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream_label,
                                std::uint64_t index = 0) {
    std::uint64_t s = mix64(seed ^ mix64(stream_label));
    s = mix64(s ^ mix64(index));
    return std::mt19937_64(s);
}

// Uniform double in [0, 1) with 53 random bits. Used instead of
// std::uniform_real_distribution so output does not depend on the
// standard library implementation.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection avoids modulo bias.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be >= 1");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

}  // namespace congen
