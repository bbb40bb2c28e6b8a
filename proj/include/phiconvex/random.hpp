#pragma once

#include <cstdint>
#include <random>

namespace phiconvex {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
/// unlike std::uniform_real_distribution.
inline double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

}  // namespace phiconvex
