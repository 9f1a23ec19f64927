#ifndef BSM_RNG_HPP
#define BSM_RNG_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bsm/bitvec.hpp"

namespace bsm {

using Seed32 = std::array<uint8_t, 32>;

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t mix64(uint64_t x) {
    uint64_t s = x;
    return splitmix64(s);
}

/// Order-sensitive 64-bit hash, used for deterministic "looks random" recorders,
/// decoders, and distinguishers.
inline uint64_t hash_bytes(const uint8_t* data, size_t len, uint64_t seed) {
    uint64_t h = seed ^ 0xcbf29ce484222325ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ull;
        h ^= h >> 29;
    }
    return mix64(h ^ (uint64_t(len) << 32));
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) { return mix64(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6))); }

/// Expands an arbitrary user seed string into 32 bytes. A 64-character hex
/// string is decoded verbatim; anything else is stretched with splitmix64.
Seed32 seed_from_string(std::string_view s);

/// Derives an independent substream seed, e.g. per Monte-Carlo trial.
inline uint64_t substream_seed(const Seed32& seed, uint64_t counter) {
    uint64_t h = 0;
    for (size_t i = 0; i < 8; ++i) h = (h << 8) | seed[i];
    uint64_t lo = 0;
    for (size_t i = 8; i < 16; ++i) lo = (lo << 8) | seed[i];
    return hash_combine(mix64(h) ^ lo, counter);
}

/// std::mt19937_64 is fully specified by the standard, so streams are
/// reproducible across platforms. Distributions are not, hence uniform_below.
inline std::mt19937_64 make_engine(uint64_t seed) { return std::mt19937_64(seed); }

/// Unbiased sampling of [0, bound) by rejection.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
    if (bound == 0) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

inline BitVec random_bits(std::mt19937_64& rng, uint64_t nbits) {
    BitVec v(nbits);
    for (uint64_t i = 0; i < nbits; ++i) v.set(i, rng() & 1);
    return v;
}

} // namespace bsm

#endif
