#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ringworm {

// Seeded random helpers. std::<distribution> output is implementation
// defined, so the draws are derived from the raw engine stream here to keep
// seeded runs byte-reproducible across standard libraries.
using RngEngine = std::mt19937_64;

inline double uniform_real(RngEngine& rng, double lo, double hi) {
    const double u = (rng() >> 11) * 0x1.0p-53; // [0,1)
    return lo + (hi - lo) * u;
}

// Inclusive range. Modulo bias is irrelevant at the ranges used here.
inline std::int64_t uniform_int(RngEngine& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(rng() % span);
}

// Box-Muller, standard normal.
inline double gaussian(RngEngine& rng) {
    double u1 = uniform_real(rng, 0.0, 1.0);
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform_real(rng, 0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

template <typename T>
void shuffle_in_place(std::vector<T>& v, RngEngine& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace ringworm
