#pragma once

// All randomness goes through std::mt19937_64, whose output sequence is fixed
// by the C++ standard. Bounded draws use rejection sampling rather than
// std::uniform_int_distribution, whose algorithm differs between standard
// libraries.

#include <cstdint>
#include <random>

namespace obring {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master ^ splitmix64(index + 1));
}

/// Uniform on [0, bound). bound == 0 means the full 64-bit range.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound == 0) return rng();
    // Largest multiple of bound representable; values at or above it are rejected.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

}  // namespace obring
