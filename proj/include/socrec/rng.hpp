#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace socrec {

// Deterministic helpers over std::mt19937_64. std::uniform_int_distribution
// and std::shuffle are implementation-defined, so seeded outputs would not
// be stable across standard libraries; these are.

inline std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t n) {
    // Rejection sampling over the engine's full 64-bit output.
    if (n == 0) return 0;
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t value = rng();
    while (value >= limit) {
        value = rng();
    }
    return value % n;
}

// Uniform in [0, 1) with 53 random bits.
inline double rng_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class T>
void seeded_shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng_below(rng, i));
        std::swap(values[i - 1], values[j]);
    }
}

} // namespace socrec
