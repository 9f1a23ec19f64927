#include "bsm/protocol.hpp"

#include <string>

namespace bsm {

RandomString::RandomString(uint64_t n, uint32_t k, BitVec bits)
    : n_(n), k_(k), bits_(std::move(bits)) {
    if (n_ == 0 || k_ == 0) fail(errc::invalid_argument, "random string needs n,k >= 1");
    if (bits_.size() != n_ * k_)
        fail(errc::dimension_mismatch, "random string payload must be exactly k*n bits");
}

void validate_key(const SecretKey& z, const Params& p) {
    if (z.z.size() != p.k())
        fail(errc::dimension_mismatch, "secret key must have k components");
    for (uint64_t c : z.z)
        if (c >= p.n()) fail(errc::dimension_mismatch, "secret key component out of Z_n");
}

SubKey derive_subkey(const SecretKey& z, uint64_t i, const Params& p) {
    validate_key(z, p);
    if (i < 1 || i > p.m())
        fail(errc::index_out_of_range, "message-bit index must lie in [1, m]");
    SubKey s;
    s.index_i = i;
    s.s.reserve(z.z.size());
    for (uint64_t c : z.z) s.s.push_back((c + (i - 1)) % p.n());
    return s;
}

bool keystream_bit(const RandomString& alpha, const SubKey& s) {
    if (s.s.size() != alpha.k())
        fail(errc::dimension_mismatch, "sub-key arity does not match the string's row count");
    bool x = false;
    for (uint32_t j = 0; j < alpha.k(); ++j) {
        if (s.s[j] >= alpha.n())
            fail(errc::dimension_mismatch, "sub-key component exceeds the row length");
        x ^= alpha.bit(j, s.s[j]);
    }
    return x;
}

FinalKey expand_key(BitSource& alpha_stream, const SecretKey& z, const Params& p) {
    validate_key(z, p);
    const uint64_t n = p.n();
    const uint64_t m = p.m();
    BitVec x(m);
    // Single pass in broadcast order. For row j the needed columns form the
    // cyclic window [z_j, z_j+m-1]; only the m accumulator bits are retained.
    for (uint32_t j = 0; j < p.k(); ++j) {
        const uint64_t zj = z.z[j];
        for (uint64_t c = 0; c < n; ++c) {
            int bit = alpha_stream.next();
            if (bit < 0) fail(errc::stream_truncated, "broadcast ended before k*n bits");
            if (bit == 0) continue;
            uint64_t i = (c + n - zj) % n;  // 0-based message index served by column c
            if (i < m) x.set(i, !x.get(i));
        }
    }
    return x;
}

FinalKey expand_key(const RandomString& alpha, const SecretKey& z, const Params& p) {
    validate_key(z, p);
    if (alpha.n() != p.n() || alpha.k() != p.k())
        fail(errc::dimension_mismatch, "random string dimensions do not match params");
    BitVec x(p.m());
    for (uint64_t i = 1; i <= p.m(); ++i)
        x.set(i - 1, keystream_bit(alpha, derive_subkey(z, i, p)));
    return x;
}

std::set<std::pair<uint32_t, uint64_t>> key_positions(const SecretKey& z, const Params& p) {
    validate_key(z, p);
    std::set<std::pair<uint32_t, uint64_t>> positions;
    for (uint64_t i = 1; i <= p.m(); ++i) {
        SubKey s = derive_subkey(z, i, p);
        for (uint32_t j = 0; j < p.k(); ++j) positions.emplace(j, s.s[j]);
    }
    return positions;
}

Ciphertext encrypt(const Message& msg, const FinalKey& x) {
    if (msg.size() != x.size())
        fail(errc::length_mismatch, "message and final key lengths differ");
    return msg ^ x;
}

Message decrypt(const Ciphertext& c, const FinalKey& x) {
    if (c.size() != x.size())
        fail(errc::length_mismatch, "ciphertext and final key lengths differ");
    return c ^ x;
}

} // namespace bsm
