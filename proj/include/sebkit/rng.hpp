#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sebkit {

// Deterministic draws on top of mt19937_64. The engine itself is fully
// specified by the standard; the standard distribution adaptors are not,
// so seeded outputs stay reproducible across toolchains only with these.

inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * uniform_unit(rng) - 1.0;
}

inline double gaussian(std::mt19937_64& rng) {
    // Box-Muller; discards the paired value.
    const double u1 = 1.0 - uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace sebkit
