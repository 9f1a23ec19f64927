#ifndef BSM_ANALYSIS_HPP
#define BSM_ANALYSIS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bsm/adversary.hpp"
#include "bsm/params.hpp"
#include "bsm/protocol.hpp"

namespace bsm {

using BigInt = boost::multiprecision::cpp_int;

// Enumeration ceilings. Counts and probabilities below these scales are exact;
// everything larger is reported through closed-form log2 bounds only.
inline constexpr uint32_t kMaxExactStringBits = 20;      // 2^{nk} materialized strings
inline constexpr uint32_t kMaxExactAdvantageBits = 24;   // exact game enumeration
inline constexpr uint64_t kMaxSpectrumKeys = uint64_t(1) << 20;
inline constexpr uint64_t kMaxLHKeys = uint64_t(1) << 12;

// Row-fraction band [1/8, 7/8] used by the low-discrepancy argument. The value
// is tied to gamma = 0.45; other storage fractions would need another band,
// so it is a configuration constant rather than a derived quantity.
inline constexpr uint64_t kBandNumerator = 1;
inline constexpr uint64_t kBandDenominator = 8;

// Canonical enumerations. Keys: mixed-radix little-endian over Z_n^k with Z_1
// varying fastest. Strings: bit (row j, column c) of alpha_t is bit (j*n + c)
// of the integer t.
SecretKey key_from_index(uint64_t t, const Params& p);
uint64_t key_to_index(const SecretKey& z, const Params& p);
RandomString string_from_index(uint64_t t, const Params& p);
uint64_t string_to_index(const RandomString& alpha);

/// The +/-1 spectrum of a string for message bit i: entry t is
/// (-1)^{X_i(alpha, Z_t)} over the canonical key enumeration.
struct SpectrumVector {
    uint64_t key_count = 0;
    std::vector<int8_t> entries;
};

SpectrumVector spectrum(const RandomString& alpha, uint64_t i, const Params& p);

enum class DiscrepancyMethod { brute_force, closed_form_product };

struct DiscrepancyResult {
    BigInt value;                     // exact d
    DiscrepancyMethod method;
    bool row_fractions_in_band;       // all p_j in [1/8, 7/8]
    double d_threshold;               // K * 2^{-k/3}, the membership cut for D
    /// The global-fraction form K*|p'-p|^k, reported alongside the exact
    /// per-row product (the two differ in general).
    std::optional<Rational> global_form_value;
};

/// d = |sum over all n^k keys of (-1)^{X_i}|, by key enumeration.
DiscrepancyResult discrepancy_bruteforce(const RandomString& alpha, uint64_t i, const Params& p);

/// d = K * prod_j |1 - 2 p_j| = prod_j |n - 2 o_j|, exact at any size.
DiscrepancyResult discrepancy_closed_form(const RandomString& alpha);

/// Exact test of d > K * 2^{-k/3} (membership in the set D): d^3 * 2^k > K^3.
bool discrepancy_over_threshold(const BigInt& d, const Params& p);

/// True iff d(nu(i, alpha)) is the same for every i in 1..m.
bool discrepancy_i_invariance_check(const RandomString& alpha, const Params& p);

struct DCensus {
    BigInt size_of_D;          // #{alpha : d > K * 2^{-k/3}}, exact
    double lemma2_bound_log2;  // 0.544*k*n, reported not asserted
    BigInt tail_count;         // #strings with ones-count outside [nk/8, 7nk/8]
    BigInt string_count;       // 2^{nk}
};

/// Exhaustive census of D (requires nk <= 20); the binomial tail count is
/// exact at any size.
DCensus enumerate_D(const Params& p);

/// Exact binomial tail: #{alpha : o(alpha) < nk/8 or o(alpha) > 7nk/8}.
BigInt ones_count_tail(uint64_t total_bits);

struct GrammianEntry {
    uint64_t j = 0;      // canonical index of the first string
    uint64_t j_prime = 0;
    int64_t delta = 0;   // exact inner product of the two spectra
};

GrammianEntry grammian_entry(const RandomString& alpha_a, const RandomString& alpha_b,
                             uint64_t i, const Params& p);

struct GoodnessRecord {
    BitVec guesses;             // H: decoder output per key, length K
    int64_t inner_product = 0;  // exact H-bar . nu
    double threshold = 0.0;     // 2K / 2^{k/6}
    bool is_good = false;       // |inner_product| >= threshold, decided exactly
    Rational success_probability;  // 1/2 + inner_product / (2K)
};

GoodnessRecord goodness(const BitVec& guesses, const SpectrumVector& nu, const Params& p);

struct LHCensus {
    BigInt size;        // |L_H|
    BigInt plus_size;   // inner product >= +threshold
    BigInt minus_size;  // inner product <= -threshold
    double lemma8_bound_log2;  // 0.544*k*n + k/3, reported not asserted
};

/// Exhaustive census of the strings for which the guess vector is good
/// (|H-bar . nu(i=1, alpha)| >= 2K/2^{k/6}). Requires nk <= 20 and n^k <= 2^12.
LHCensus enumerate_LH(const BitVec& guesses, const Params& p);

struct PreimageCensus {
    std::map<BitVec, uint64_t> histogram;  // recorder output -> pre-image size
    Rational prob_small;                   // mass of strings in classes below 2^{0.548kn}
    double lemma9_rhs_log2;                // -0.002*k*n
    bool inequality_holds = false;         // prob_small <= 2^{-0.002kn}, decided exactly
    uint64_t class_count = 0;
};

/// Partitions all 2^{nk} strings by recorder output. Requires nk <= 20.
PreimageCensus preimage_census(const Recorder& rec, const Params& p);

struct BoundsReport {
    double theorem1_bound_log2;   // log2( m * (2^{-k/6+1} + 2^{-0.002kn+2}) )
    double prop1_bound_log2;      // log2( 2^{-k/6} + 2^{-0.002kn+1} )
    double lemma2_bound_log2;     // 0.544*k*n
    double lemma8_bound_log2;     // 0.544*k*n + k/3
    double lemma9_rhs_log2;       // -0.002*k*n
    double stirling_tail_log2;    // -n*k*(1 - h(1/8)) + 1
    double h_eighth;              // (1/8)log2(8) + (7/8)log2(8/7)
    bool vacuous;                 // theorem bound >= 1

    std::string to_json(const Params& p) const;
};

/// All closed-form bound quantities in log2 space; safe at any scale.
BoundsReport security_bounds(const Params& p);

struct IndependenceReport {
    bool joint_product_form_ok = false;   // joint law of X equals product of marginals
    bool xminusi_z_invariant_ok = false;  // law of X^{-i} identical across all Z
};

/// Exhaustive rational check of the independence lemmas. Requires nk <= 16.
IndependenceReport independence_check(const Params& p);

std::string rational_to_string(const Rational& r);

/// Report entry for census/bounds quantities:
/// {"quantity", "params", "exact", "bound_log2", "method"}.
std::string census_json(const std::string& quantity, const Params& p,
                        const std::optional<std::string>& exact, double bound_log2,
                        const std::string& method);

} // namespace bsm

#endif
