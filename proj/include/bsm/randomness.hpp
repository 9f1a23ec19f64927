#ifndef BSM_RANDOMNESS_HPP
#define BSM_RANDOMNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bsm/params.hpp"
#include "bsm/protocol.hpp"
#include "bsm/rng.hpp"

namespace bsm {

using Rational = boost::multiprecision::cpp_rational;

enum class GeneratorKind {
    /// splitmix64-driven filler; cheap, reproducible across platforms, test use.
    deterministic_test,
    /// ChaCha20 keystream keyed by the 32-byte seed; still deterministic per seed.
    cryptographic,
};

struct StreamConfig {
    Seed32 seed{};
    uint64_t block_size = 4096;
    GeneratorKind generator_kind = GeneratorKind::deterministic_test;
};

/// Ones-count statistics of a string: per-row fractions p_j, the global
/// fraction p, and the raw ones count. All fractions are exact rationals.
struct RowStats {
    std::vector<Rational> per_row_ones_fraction;
    Rational global_ones_fraction;
    uint64_t ones_count = 0;
};

/// Fills k*n bits deterministically from (seed, n, k, generator_kind).
RandomString generate(const StreamConfig& cfg, const Params& p);
RandomString generate(const StreamConfig& cfg, uint64_t n, uint32_t k);

/// Simulated broadcast: consecutive blocks of cfg.block_size bits in row-major
/// order (last block may be shorter). Concatenation equals the packed string.
std::vector<BitVec> broadcast_blocks(const RandomString& alpha, const StreamConfig& cfg);

/// Persisted format "BSMA": magic, version u16 LE (=1), n u64 LE, k u32 LE,
/// then ceil(k*n/8) payload bytes, row-major, LSB-first within each byte,
/// final partial byte zero-padded in the high bits.
void save(const RandomString& alpha, const std::string& path);
RandomString load(const std::string& path);

RowStats row_stats(const RandomString& alpha);

/// Raw ChaCha20 keystream (RFC 8439 block function, zero nonce, counter from
/// 0). Exposed for the generator's test vector.
void chacha20_keystream(const Seed32& key, uint8_t* out, size_t len);

} // namespace bsm

#endif
