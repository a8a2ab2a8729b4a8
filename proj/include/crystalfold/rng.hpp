#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace crystalfold {

/// Counter-based deterministic randomness. Every draw is addressed by
/// (seed, stream, counter), so parallel consumers can fill disjoint ranges in
/// any order and still produce the sequence a single thread would, and the
/// same seed reproduces every artifact bitwise on any platform.
///
/// The construction is splitmix64: a stream is the splitmix sequence started
/// at a key mixed from (seed, stream id), and `counter` indexes into it
/// directly instead of stepping hidden state.

/// splitmix64 output finalizer (bijective, full avalanche).
inline std::uint64_t rng_finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Draw `counter` of stream `stream` under `seed`, uniform over 64-bit words.
inline std::uint64_t rng_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    constexpr std::uint64_t gamma = 0x9E3779B97F4A7C15ULL;  // golden-ratio step
    const std::uint64_t key = rng_finalize(seed + gamma * (stream + 1));
    return rng_finalize(key + gamma * (counter + 1));
}

/// Uniform double in [0, 1), 53-bit resolution.
inline double rng_unit(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(rng_u64(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller. Draw `index` consumes counters 2*index and
/// 2*index + 1 of the stream; the first uniform is shifted into (0, 1] so the
/// logarithm is always finite.
inline double rng_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const double u1 =
        static_cast<double>((rng_u64(seed, stream, 2 * index) >> 11) + 1) * 0x1.0p-53;
    const double u2 = rng_unit(seed, stream, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace crystalfold
