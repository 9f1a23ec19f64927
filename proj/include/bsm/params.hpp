#ifndef BSM_PARAMS_HPP
#define BSM_PARAMS_HPP

#include <cstdint>

#include "bsm/error.hpp"

namespace bsm {

/// Protocol parameters. n is the row length in bits, k the security parameter
/// (number of rows), m the message length, and gamma the adversary storage
/// fraction. The storage budget beta = floor(gamma*k*n), the key count n^k and
/// the string count 2^(n*k) are always derived from these, never stored.
class Params {
public:
    static Params create(uint64_t n, uint32_t k, uint64_t m,
                         uint64_t gamma_num = 45, uint64_t gamma_den = 100);

    uint64_t n() const { return n_; }
    uint32_t k() const { return k_; }
    uint64_t m() const { return m_; }
    uint64_t gamma_num() const { return gamma_num_; }
    uint64_t gamma_den() const { return gamma_den_; }
    double gamma() const { return double(gamma_num_) / double(gamma_den_); }

    /// Adversary storage budget beta = floor(gamma * k * n), in bits.
    uint64_t beta() const { return beta_; }

    /// k*n, the length of the random string in bits.
    uint64_t total_bits() const { return n_ * k_; }

    /// log2 of the number of possible secret keys, K = n^k.
    double log2_key_count() const;

    /// K = n^k as a machine word. Throws too_large_to_enumerate if it does not fit.
    uint64_t key_count() const;

    bool keys_enumerable(uint64_t max_keys) const;
    bool strings_enumerable(uint32_t max_bits) const { return total_bits() <= max_bits; }

private:
    Params(uint64_t n, uint32_t k, uint64_t m, uint64_t gn, uint64_t gd, uint64_t beta)
        : n_(n), k_(k), m_(m), gamma_num_(gn), gamma_den_(gd), beta_(beta) {}

    uint64_t n_;
    uint32_t k_;
    uint64_t m_;
    uint64_t gamma_num_;
    uint64_t gamma_den_;
    uint64_t beta_;
};

} // namespace bsm

#endif
