#pragma once

// Stateless seed derivation. Every Monte Carlo sample and every vertex pair
// gets its own stream, so results never depend on traversal order or on how
// samples are split across threads.

#include <cstdint>
#include <utility>

namespace rcm {

// SplitMix64 finalizer.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t index) {
    return mix64(mix64(base ^ mix64(stream)) + index);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double unit_interval(uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

// Coin for the unordered pair {i, j}.
inline double pair_uniform(uint64_t i, uint64_t j, uint64_t edge_seed) {
    if (i > j) std::swap(i, j);
    return unit_interval(mix64(mix64(edge_seed ^ mix64(i)) + j));
}

}  // namespace rcm
