#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace betaelm {

using Rng = std::mt19937_64;

/// Uniform draw on [lo, hi]. Returns lo exactly when lo == hi.
inline double uniform(Rng& rng, double lo, double hi)
{
    const double t = std::generate_canonical<double, 53>(rng);
    return lo + (hi - lo) * t;
}

/// 64-bit FNV-1a. Stable across platforms and runs, unlike std::hash.
constexpr std::uint64_t stable_hash(std::string_view text,
                                    std::uint64_t h = 14695981039346656037ULL)
{
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace betaelm
