#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sdf {

// FNV-1a, used for seed derivation and the reference embedder's token
// hashing. Stable across platforms.
inline std::uint64_t fnv1a(std::string_view s,
                           std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One named RNG stream per (op, record id): per-record results do not
// depend on batch order.
inline std::mt19937_64 record_rng(std::uint64_t seed, std::string_view op,
                                  std::string_view record_id) {
    std::uint64_t h = fnv1a(op);
    h = fnv1a(record_id, h);
    return std::mt19937_64(splitmix64(seed ^ h));
}

}  // namespace sdf
