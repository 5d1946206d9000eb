#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace zakframe {

// Explicit bit mappings so that streams depend only on the seed, not on
// library-specific distribution implementations.

inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

// Uniform on [-1/2, 1/2).
inline double uniform_unit(std::mt19937_64& rng) {
    return uniform01(rng) - 0.5;
}

// Standard complex Gaussian: E|z|^2 = 1.
inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 == 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    const double r = std::sqrt(-std::log(u1));
    return std::polar(r, 2.0 * std::numbers::pi * u2);
}

}  // namespace zakframe
