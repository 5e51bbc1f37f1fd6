#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace metricsvis::rnd {

// std::uniform_real_distribution and std::normal_distribution are not
// specified bit-for-bit, so draws are derived from the raw engine output to
// keep seeded results identical across standard libraries.

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform index in [0, n).
inline std::size_t index(std::mt19937_64& rng, std::size_t n) {
    const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

}  // namespace metricsvis::rnd
