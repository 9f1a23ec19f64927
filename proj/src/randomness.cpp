#include "bsm/randomness.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace bsm {

namespace {

constexpr char kMagic[4] = {'B', 'S', 'M', 'A'};
constexpr uint16_t kVersion = 1;

inline uint32_t rotl32(uint32_t x, int r) { return (x << r) | (x >> (32 - r)); }

void chacha_quarter(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
    a += b; d ^= a; d = rotl32(d, 16);
    c += d; b ^= c; b = rotl32(b, 12);
    a += b; d ^= a; d = rotl32(d, 8);
    c += d; b ^= c; b = rotl32(b, 7);
}

// ChaCha20 block function per RFC 8439, 96-bit zero nonce, 32-bit counter.
void chacha20_block(const Seed32& key, uint32_t counter, uint8_t out[64]) {
    static constexpr uint32_t sigma[4] = {0x61707865, 0x3320646e, 0x79622d32, 0x6b206574};
    uint32_t state[16];
    for (int i = 0; i < 4; ++i) state[i] = sigma[i];
    for (int i = 0; i < 8; ++i) {
        state[4 + i] = uint32_t(key[4 * i]) | (uint32_t(key[4 * i + 1]) << 8) |
                       (uint32_t(key[4 * i + 2]) << 16) | (uint32_t(key[4 * i + 3]) << 24);
    }
    state[12] = counter;
    state[13] = state[14] = state[15] = 0;

    uint32_t w[16];
    std::memcpy(w, state, sizeof(w));
    for (int round = 0; round < 10; ++round) {
        chacha_quarter(w[0], w[4], w[8], w[12]);
        chacha_quarter(w[1], w[5], w[9], w[13]);
        chacha_quarter(w[2], w[6], w[10], w[14]);
        chacha_quarter(w[3], w[7], w[11], w[15]);
        chacha_quarter(w[0], w[5], w[10], w[15]);
        chacha_quarter(w[1], w[6], w[11], w[12]);
        chacha_quarter(w[2], w[7], w[8], w[13]);
        chacha_quarter(w[3], w[4], w[9], w[14]);
    }
    for (int i = 0; i < 16; ++i) {
        uint32_t v = w[i] + state[i];
        out[4 * i] = uint8_t(v);
        out[4 * i + 1] = uint8_t(v >> 8);
        out[4 * i + 2] = uint8_t(v >> 16);
        out[4 * i + 3] = uint8_t(v >> 24);
    }
}

uint64_t read_le(const uint8_t* p, int bytes) {
    uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

void write_le(std::ofstream& out, uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        char c = char(v & 0xff);
        out.write(&c, 1);
        v >>= 8;
    }
}

} // namespace

void chacha20_keystream(const Seed32& key, uint8_t* out, size_t len) {
    uint8_t block[64];
    uint32_t counter = 0;
    size_t off = 0;
    while (off < len) {
        chacha20_block(key, counter++, block);
        size_t take = std::min(size_t(64), len - off);
        std::memcpy(out + off, block, take);
        off += take;
    }
}

Seed32 seed_from_string(std::string_view s) {
    Seed32 seed{};
    auto hex_val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (s.size() == 64) {
        bool all_hex = true;
        for (char c : s)
            if (hex_val(c) < 0) { all_hex = false; break; }
        if (all_hex) {
            for (size_t i = 0; i < 32; ++i)
                seed[i] = uint8_t(hex_val(s[2 * i]) * 16 + hex_val(s[2 * i + 1]));
            return seed;
        }
    }
    uint64_t state = 0x5b0e423a2c1fd1a7ull;
    for (char c : s) state = hash_combine(state, uint64_t(uint8_t(c)));
    for (size_t w = 0; w < 4; ++w) {
        uint64_t v = splitmix64(state);
        for (size_t b = 0; b < 8; ++b) seed[8 * w + b] = uint8_t(v >> (8 * b));
    }
    return seed;
}

RandomString generate(const StreamConfig& cfg, uint64_t n, uint32_t k) {
    const uint64_t total = n * k;
    const size_t nbytes = size_t((total + 7) / 8);
    std::vector<uint8_t> buf(nbytes, 0);
    if (cfg.generator_kind == GeneratorKind::cryptographic) {
        chacha20_keystream(cfg.seed, buf.data(), buf.size());
    } else {
        uint64_t state = 0;
        for (size_t i = 0; i < 8; ++i) state = (state << 8) | cfg.seed[i];
        uint64_t tweak = 0;
        for (size_t i = 8; i < 16; ++i) tweak = (tweak << 8) | cfg.seed[i];
        state ^= mix64(tweak);
        for (size_t i = 0; i < nbytes; i += 8) {
            uint64_t v = splitmix64(state);
            for (size_t b = 0; b < 8 && i + b < nbytes; ++b) buf[i + b] = uint8_t(v >> (8 * b));
        }
    }
    return RandomString(n, k, BitVec::from_bytes(buf.data(), buf.size(), total));
}

RandomString generate(const StreamConfig& cfg, const Params& p) {
    return generate(cfg, p.n(), p.k());
}

std::vector<BitVec> broadcast_blocks(const RandomString& alpha, const StreamConfig& cfg) {
    if (cfg.block_size == 0) fail(errc::invalid_argument, "block_size must be positive");
    std::vector<BitVec> blocks;
    const BitVec& bits = alpha.bits();
    for (uint64_t start = 0; start < bits.size(); start += cfg.block_size) {
        uint64_t len = std::min(cfg.block_size, bits.size() - start);
        BitVec block(len);
        for (uint64_t i = 0; i < len; ++i) block.set(i, bits.get(start + i));
        blocks.push_back(std::move(block));
    }
    return blocks;
}

void save(const RandomString& alpha, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io_error, "cannot open for writing: " + path);
    out.write(kMagic, 4);
    write_le(out, kVersion, 2);
    write_le(out, alpha.n(), 8);
    write_le(out, alpha.k(), 4);
    auto payload = alpha.bits().to_bytes();
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    if (!out) fail(errc::io_error, "write failed: " + path);
}

RandomString load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open for reading: " + path);
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() < 18) fail(errc::format_error, "file too short for a BSMA header");
    if (std::memcmp(data.data(), kMagic, 4) != 0) fail(errc::format_error, "bad magic, expected BSMA");
    uint64_t version = read_le(data.data() + 4, 2);
    if (version != kVersion) fail(errc::format_error, "unsupported BSMA version");
    uint64_t n = read_le(data.data() + 6, 8);
    uint64_t k = read_le(data.data() + 14, 4);
    if (n == 0 || k == 0) fail(errc::format_error, "BSMA header has zero dimensions");
    if (n > UINT64_MAX / k) fail(errc::format_error, "BSMA dimensions overflow");
    uint64_t total = n * k;
    uint64_t expected = 18 + (total + 7) / 8;
    if (data.size() != expected) fail(errc::format_error, "BSMA payload length mismatch");
    BitVec bits = BitVec::from_bytes(data.data() + 18, data.size() - 18, total);
    return RandomString(n, uint32_t(k), std::move(bits));
}

RowStats row_stats(const RandomString& alpha) {
    RowStats stats;
    uint64_t total_ones = 0;
    stats.per_row_ones_fraction.reserve(alpha.k());
    for (uint32_t j = 0; j < alpha.k(); ++j) {
        uint64_t ones = 0;
        for (uint64_t c = 0; c < alpha.n(); ++c) ones += alpha.bit(j, c);
        total_ones += ones;
        stats.per_row_ones_fraction.emplace_back(ones, alpha.n());
    }
    stats.ones_count = total_ones;
    stats.global_ones_fraction = Rational(total_ones, uint64_t(alpha.n()) * alpha.k());
    return stats;
}

} // namespace bsm
