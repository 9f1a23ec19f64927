#ifndef BSM_PROTOCOL_HPP
#define BSM_PROTOCOL_HPP

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "bsm/bitvec.hpp"
#include "bsm/params.hpp"

namespace bsm {

/// The public random string alpha: k rows of n bits, stored row-major.
/// bit(j, c) is column c of row j, rows indexed 0..k-1, columns 0..n-1
/// (column c holds the (c+1)th bit of the row).
class RandomString {
public:
    RandomString(uint64_t n, uint32_t k, BitVec bits);

    uint64_t n() const { return n_; }
    uint32_t k() const { return k_; }
    bool bit(uint32_t row, uint64_t col) const { return bits_.get(uint64_t(row) * n_ + col); }

    /// Row-major packed bits, broadcast order.
    const BitVec& bits() const { return bits_; }

    bool operator==(const RandomString& o) const {
        return n_ == o.n_ && k_ == o.k_ && bits_ == o.bits_;
    }

private:
    uint64_t n_;
    uint32_t k_;
    BitVec bits_;
};

/// Secret key Z, a k-tuple over Z_n.
struct SecretKey {
    std::vector<uint64_t> z;
};

/// Sub-key for message bit index_i: every component of Z shifted by
/// (index_i - 1) mod n. Message-bit indices are 1-based throughout; the
/// shift by (i-1) is applied here and nowhere else.
struct SubKey {
    std::vector<uint64_t> s;
    uint64_t index_i = 0;
};

using FinalKey = BitVec;
using Message = BitVec;
using Ciphertext = BitVec;

/// Pull-based bit source in broadcast order. next() yields 0/1, or -1 once
/// the stream is exhausted.
class BitSource {
public:
    virtual ~BitSource() = default;
    virtual int next() = 0;
};

class RandomStringSource final : public BitSource {
public:
    explicit RandomStringSource(const RandomString& a) : a_(a) {}
    int next() override {
        if (pos_ >= a_.bits().size()) return -1;
        return a_.bits().get(pos_++) ? 1 : 0;
    }

private:
    const RandomString& a_;
    uint64_t pos_ = 0;
};

class BitVecSource final : public BitSource {
public:
    explicit BitVecSource(const BitVec& v) : v_(v) {}
    int next() override {
        if (pos_ >= v_.size()) return -1;
        return v_.get(pos_++) ? 1 : 0;
    }

private:
    const BitVec& v_;
    uint64_t pos_ = 0;
};

void validate_key(const SecretKey& z, const Params& p);

/// Sub-key for message bit i: (z_1 + (i-1) mod n, ..., z_k + (i-1) mod n).
SubKey derive_subkey(const SecretKey& z, uint64_t i, const Params& p);

/// XOR over rows of the sub-key-selected bits.
bool keystream_bit(const RandomString& alpha, const SubKey& s);

/// Streaming key expansion: consumes exactly k*n bits in broadcast order,
/// reading each position once and retaining only the m accumulator bits.
FinalKey expand_key(BitSource& alpha_stream, const SecretKey& z, const Params& p);

/// Batch key expansion over a materialized string; applies keystream_bit per
/// message index. Must agree with the streaming route on all inputs.
FinalKey expand_key(const RandomString& alpha, const SecretKey& z, const Params& p);

/// Set of (row, column) positions read by the full key expansion; cardinality
/// is exactly m*k because sub-keys for distinct message bits never collide
/// while m <= n.
std::set<std::pair<uint32_t, uint64_t>> key_positions(const SecretKey& z, const Params& p);

Ciphertext encrypt(const Message& msg, const FinalKey& x);
Message decrypt(const Ciphertext& c, const FinalKey& x);

} // namespace bsm

#endif
