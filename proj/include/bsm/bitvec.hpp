#ifndef BSM_BITVEC_HPP
#define BSM_BITVEC_HPP

#include <cstdint>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "bsm/error.hpp"

namespace bsm {

/// Dynamically sized bit vector. Bit i lives in word i/64, position i%64,
/// which matches the persisted layout (LSB-first within each byte). Unused
/// tail bits of the last word are kept at zero so equality and hashing work
/// on the raw words.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(uint64_t nbits) : nbits_(nbits), words_(word_count(nbits), 0) {}

    static BitVec from_bits(std::initializer_list<int> bits) {
        BitVec v(bits.size());
        uint64_t i = 0;
        for (int b : bits) v.set(i++, b != 0);
        return v;
    }

    /// Parses "0"/"1" characters, index 0 first.
    static BitVec from_string(std::string_view s) {
        BitVec v(s.size());
        for (uint64_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (c != '0' && c != '1') fail(errc::format_error, "bit string must contain only 0/1");
            v.set(i, c == '1');
        }
        return v;
    }

    /// LSB-first within each byte; extra payload bits beyond nbits are ignored.
    static BitVec from_bytes(const uint8_t* data, size_t nbytes, uint64_t nbits) {
        if (nbytes * 8 < nbits) fail(errc::format_error, "byte buffer shorter than bit length");
        BitVec v(nbits);
        for (uint64_t i = 0; i < nbits; ++i)
            if ((data[i / 8] >> (i % 8)) & 1) v.set(i, true);
        return v;
    }

    uint64_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool get(uint64_t i) const {
        if (i >= nbits_) fail(errc::index_out_of_range, "bit index out of range");
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    void set(uint64_t i, bool v) {
        if (i >= nbits_) fail(errc::index_out_of_range, "bit index out of range");
        uint64_t mask = uint64_t(1) << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void push_back(bool v) {
        if (nbits_ % 64 == 0) words_.push_back(0);
        ++nbits_;
        set(nbits_ - 1, v);
    }

    uint64_t count_ones() const {
        uint64_t c = 0;
        for (uint64_t w : words_) c += static_cast<uint64_t>(__builtin_popcountll(w));
        return c;
    }

    BitVec operator^(const BitVec& o) const {
        if (nbits_ != o.nbits_) fail(errc::length_mismatch, "xor of bit vectors of different lengths");
        BitVec r(nbits_);
        for (size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] ^ o.words_[w];
        return r;
    }

    bool operator==(const BitVec& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }
    bool operator!=(const BitVec& o) const { return !(*this == o); }

    bool operator<(const BitVec& o) const {
        if (nbits_ != o.nbits_) return nbits_ < o.nbits_;
        return words_ < o.words_;
    }

    /// ceil(size/8) bytes, LSB-first, final partial byte zero-padded in high bits.
    std::vector<uint8_t> to_bytes() const {
        std::vector<uint8_t> out((nbits_ + 7) / 8, 0);
        for (size_t i = 0; i < out.size(); ++i) {
            uint64_t w = words_[i / 8];
            out[i] = static_cast<uint8_t>(w >> ((i % 8) * 8));
        }
        return out;
    }

    std::string to_string01() const {
        std::string s(nbits_, '0');
        for (uint64_t i = 0; i < nbits_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    uint64_t hash() const {
        uint64_t h = 0x9e3779b97f4a7c15ull ^ nbits_;
        for (uint64_t w : words_) {
            h ^= w;
            h *= 0xff51afd7ed558ccdull;
            h ^= h >> 33;
        }
        return h;
    }

private:
    static size_t word_count(uint64_t nbits) { return static_cast<size_t>((nbits + 63) / 64); }

    uint64_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

struct BitVecHash {
    size_t operator()(const BitVec& v) const { return static_cast<size_t>(v.hash()); }
};

} // namespace bsm

#endif
