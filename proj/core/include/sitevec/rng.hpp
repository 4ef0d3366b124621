#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sitevec {

// All randomness in the toolkit flows from one master seed through named
// sub-streams ("train/worker/0", "folds", ...) so that components can be
// re-seeded independently without disturbing each other.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the stream name
    for (unsigned char c : stream) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(master ^ h);
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::string_view stream) {
    return std::mt19937_64(derive_seed(master, stream));
}

// Uniform in [0,1). Explicit construction instead of
// std::uniform_real_distribution, whose output sequence is
// implementation-defined; this keeps artifacts reproducible across toolchains.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform in {0, ..., n-1} via the fixed-point multiply trick. The residual
// bias is O(n / 2^64), orders of magnitude below anything observable here.
inline std::uint64_t bounded(std::mt19937_64& g, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(g()) * static_cast<unsigned __int128>(n)) >> 64);
}

}  // namespace sitevec
