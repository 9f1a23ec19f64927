#include "bsm/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <json.hpp>

namespace bsm {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::pow;

double log2_add(double a, double b) {
    double hi = std::max(a, b);
    double lo = std::min(a, b);
    if (std::isinf(lo) && lo < 0) return hi;
    return hi + std::log1p(std::exp2(lo - hi)) / M_LN2;
}

void require_string_enum(const Params& p, uint32_t max_bits, const char* who) {
    if (!p.strings_enumerable(max_bits))
        fail(errc::too_large_to_enumerate,
             std::string(who) + " needs k*n <= " + std::to_string(max_bits));
}

void require_key_enum(const Params& p, uint64_t max_keys, const char* who) {
    if (!p.keys_enumerable(max_keys))
        fail(errc::too_large_to_enumerate, std::string(who) + " needs n^k within the key ceiling");
}

// Odometer over Z_n^k, Z_1 (index 0) fastest.
bool advance_key(std::vector<uint64_t>& z, uint64_t n) {
    for (auto& digit : z) {
        if (++digit < n) return true;
        digit = 0;
    }
    return false;
}

std::vector<uint64_t> row_ones(const RandomString& alpha) {
    std::vector<uint64_t> ones(alpha.k(), 0);
    for (uint32_t j = 0; j < alpha.k(); ++j)
        for (uint64_t c = 0; c < alpha.n(); ++c) ones[j] += alpha.bit(j, c);
    return ones;
}

bool rows_in_band(const RandomString& alpha) {
    // p_j in [num/den, (den-num)/den], compared exactly in integers.
    auto ones = row_ones(alpha);
    for (uint64_t o : ones) {
        if (kBandDenominator * o < kBandNumerator * alpha.n()) return false;
        if (kBandDenominator * o > (kBandDenominator - kBandNumerator) * alpha.n()) return false;
    }
    return true;
}

nlohmann::json params_json(const Params& p) {
    return {{"n", p.n()}, {"k", p.k()}, {"m", p.m()}, {"gamma", p.gamma()}};
}

} // namespace

SecretKey key_from_index(uint64_t t, const Params& p) {
    SecretKey z;
    z.z.resize(p.k());
    for (uint32_t j = 0; j < p.k(); ++j) {
        z.z[j] = t % p.n();
        t /= p.n();
    }
    return z;
}

uint64_t key_to_index(const SecretKey& z, const Params& p) {
    validate_key(z, p);
    uint64_t t = 0;
    for (uint32_t j = p.k(); j-- > 0;) t = t * p.n() + z.z[j];
    return t;
}

RandomString string_from_index(uint64_t t, const Params& p) {
    if (p.total_bits() > 63) fail(errc::too_large_to_enumerate, "string index needs k*n <= 63");
    BitVec bits(p.total_bits());
    for (uint64_t b = 0; b < p.total_bits(); ++b) bits.set(b, (t >> b) & 1);
    return RandomString(p.n(), p.k(), std::move(bits));
}

uint64_t string_to_index(const RandomString& alpha) {
    const BitVec& bits = alpha.bits();
    if (bits.size() > 63) fail(errc::too_large_to_enumerate, "string index needs k*n <= 63");
    uint64_t t = 0;
    for (uint64_t b = bits.size(); b-- > 0;) t = (t << 1) | uint64_t(bits.get(b));
    return t;
}

SpectrumVector spectrum(const RandomString& alpha, uint64_t i, const Params& p) {
    require_key_enum(p, kMaxSpectrumKeys, "spectrum");
    if (alpha.n() != p.n() || alpha.k() != p.k())
        fail(errc::dimension_mismatch, "string dimensions do not match params");
    if (i < 1 || i > p.m()) fail(errc::index_out_of_range, "message-bit index must lie in [1, m]");

    SpectrumVector nu;
    nu.key_count = p.key_count();
    nu.entries.resize(nu.key_count);
    std::vector<uint64_t> z(p.k(), 0);
    uint64_t t = 0;
    do {
        bool x = false;
        for (uint32_t j = 0; j < p.k(); ++j) x ^= alpha.bit(j, (z[j] + i - 1) % p.n());
        nu.entries[t++] = x ? int8_t(-1) : int8_t(1);
    } while (advance_key(z, p.n()));
    return nu;
}

DiscrepancyResult discrepancy_bruteforce(const RandomString& alpha, uint64_t i, const Params& p) {
    require_key_enum(p, kMaxSpectrumKeys, "discrepancy_bruteforce");
    if (alpha.n() != p.n() || alpha.k() != p.k())
        fail(errc::dimension_mismatch, "string dimensions do not match params");
    if (i < 1 || i > p.m()) fail(errc::index_out_of_range, "message-bit index must lie in [1, m]");

    int64_t sum = 0;
    std::vector<uint64_t> z(p.k(), 0);
    do {
        bool x = false;
        for (uint32_t j = 0; j < p.k(); ++j) x ^= alpha.bit(j, (z[j] + i - 1) % p.n());
        sum += x ? -1 : 1;
    } while (advance_key(z, p.n()));

    DiscrepancyResult r;
    r.value = BigInt(sum < 0 ? -sum : sum);
    r.method = DiscrepancyMethod::brute_force;
    r.row_fractions_in_band = rows_in_band(alpha);
    r.d_threshold = std::exp2(p.log2_key_count() - double(p.k()) / 3.0);
    return r;
}

DiscrepancyResult discrepancy_closed_form(const RandomString& alpha) {
    const uint64_t n = alpha.n();
    const uint32_t k = alpha.k();
    auto ones = row_ones(alpha);

    BigInt d = 1;
    uint64_t total_ones = 0;
    for (uint64_t o : ones) {
        int64_t diff = int64_t(n) - 2 * int64_t(o);
        d *= BigInt(diff < 0 ? -diff : diff);
        total_ones += o;
    }

    DiscrepancyResult r;
    r.value = d;
    r.method = DiscrepancyMethod::closed_form_product;
    r.row_fractions_in_band = rows_in_band(alpha);
    r.d_threshold = std::exp2(double(k) * std::log2(double(n)) - double(k) / 3.0);

    // The global-fraction form K*|p'-p|^k; differs from the exact per-row
    // product whenever the rows are unevenly weighted.
    uint64_t kn = n * k;
    int64_t gdiff = int64_t(kn) - 2 * int64_t(total_ones);
    BigInt num = pow(BigInt(gdiff < 0 ? -gdiff : gdiff), k) * pow(BigInt(n), k);
    BigInt den = pow(BigInt(kn), k);
    r.global_form_value = Rational(num, den);
    return r;
}

bool discrepancy_over_threshold(const BigInt& d, const Params& p) {
    // d > K * 2^{-k/3}  <=>  d^3 * 2^k > K^3, all exact.
    BigInt lhs = pow(d, 3) << p.k();
    BigInt rhs = pow(pow(BigInt(p.n()), p.k()), 3);
    return lhs > rhs;
}

bool discrepancy_i_invariance_check(const RandomString& alpha, const Params& p) {
    require_string_enum(p, kMaxExactStringBits, "discrepancy_i_invariance_check");
    require_key_enum(p, kMaxSpectrumKeys, "discrepancy_i_invariance_check");
    if (p.m() < 2) fail(errc::invalid_argument, "i-invariance needs m >= 2");
    BigInt first = discrepancy_bruteforce(alpha, 1, p).value;
    for (uint64_t i = 2; i <= p.m(); ++i)
        if (discrepancy_bruteforce(alpha, i, p).value != first) return false;
    return true;
}

BigInt ones_count_tail(uint64_t total_bits) {
    // #{o : 8o < nk} summed binomially, doubled by the o <-> nk-o symmetry.
    BigInt lower = 0;
    BigInt binom = 1;  // C(nk, 0)
    for (uint64_t o = 0; 8 * o < total_bits; ++o) {
        if (o > 0) {
            binom *= total_bits - (o - 1);
            binom /= o;
        }
        lower += binom;
    }
    return 2 * lower;
}

DCensus enumerate_D(const Params& p) {
    require_string_enum(p, kMaxExactStringBits, "enumerate_D");

    DCensus census;
    census.lemma2_bound_log2 = 0.544 * double(p.total_bits());
    census.tail_count = ones_count_tail(p.total_bits());
    census.string_count = BigInt(1) << p.total_bits();

    BigInt in_d = 0;
    const uint64_t string_total = uint64_t(1) << p.total_bits();
    for (uint64_t t = 0; t < string_total; ++t) {
        RandomString alpha = string_from_index(t, p);
        BigInt d = discrepancy_bruteforce(alpha, 1, p).value;
        if (discrepancy_over_threshold(d, p)) ++in_d;
    }
    census.size_of_D = in_d;
    return census;
}

GrammianEntry grammian_entry(const RandomString& alpha_a, const RandomString& alpha_b,
                             uint64_t i, const Params& p) {
    SpectrumVector va = spectrum(alpha_a, i, p);
    SpectrumVector vb = spectrum(alpha_b, i, p);
    GrammianEntry e;
    if (p.total_bits() <= 63) {
        e.j = string_to_index(alpha_a);
        e.j_prime = string_to_index(alpha_b);
    }
    int64_t dot = 0;
    for (uint64_t t = 0; t < va.key_count; ++t) dot += int64_t(va.entries[t]) * vb.entries[t];
    e.delta = dot;
    return e;
}

GoodnessRecord goodness(const BitVec& guesses, const SpectrumVector& nu, const Params& p) {
    if (guesses.size() != nu.key_count)
        fail(errc::dimension_mismatch, "guess vector length must equal the key count");

    int64_t ip = 0;
    for (uint64_t t = 0; t < nu.key_count; ++t)
        ip += (guesses.get(t) ? -1 : 1) * int64_t(nu.entries[t]);

    const uint64_t K = nu.key_count;
    GoodnessRecord rec;
    rec.guesses = guesses;
    rec.inner_product = ip;
    rec.threshold = std::exp2(1.0 + std::log2(double(K)) - double(p.k()) / 6.0);
    // |ip| >= 2K * 2^{-k/6}  <=>  ip^6 * 2^k >= 64 * K^6, all exact.
    BigInt lhs = pow(BigInt(ip < 0 ? -ip : ip), 6) << p.k();
    BigInt rhs = BigInt(64) * pow(BigInt(K), 6);
    rec.is_good = lhs >= rhs;
    rec.success_probability = Rational(BigInt(K) + ip, BigInt(2) * K);
    return rec;
}

LHCensus enumerate_LH(const BitVec& guesses, const Params& p) {
    require_string_enum(p, kMaxExactStringBits, "enumerate_LH");
    require_key_enum(p, kMaxLHKeys, "enumerate_LH");
    const uint64_t K = p.key_count();
    if (guesses.size() != K)
        fail(errc::dimension_mismatch, "guess vector length must equal the key count");

    LHCensus census;
    census.plus_size = 0;
    census.minus_size = 0;
    census.lemma8_bound_log2 = 0.544 * double(p.total_bits()) + double(p.k()) / 3.0;

    const BigInt rhs = BigInt(64) * pow(BigInt(K), 6);
    const uint64_t string_total = uint64_t(1) << p.total_bits();
    for (uint64_t t = 0; t < string_total; ++t) {
        RandomString alpha = string_from_index(t, p);
        SpectrumVector nu = spectrum(alpha, 1, p);
        int64_t ip = 0;
        for (uint64_t j = 0; j < K; ++j) ip += (guesses.get(j) ? -1 : 1) * int64_t(nu.entries[j]);
        BigInt lhs = pow(BigInt(ip < 0 ? -ip : ip), 6) << p.k();
        if (lhs >= rhs) {
            if (ip >= 0)
                ++census.plus_size;
            else
                ++census.minus_size;
        }
    }
    census.size = census.plus_size + census.minus_size;
    return census;
}

PreimageCensus preimage_census(const Recorder& rec, const Params& p) {
    require_string_enum(p, kMaxExactStringBits, "preimage_census");

    PreimageCensus census;
    const uint64_t string_total = uint64_t(1) << p.total_bits();
    for (uint64_t t = 0; t < string_total; ++t) {
        RandomString alpha = string_from_index(t, p);
        BitVec eta = rec.behavior(alpha);
        if (eta.size() > rec.declared_budget)
            fail(errc::storage_exceeded, "recorder exceeded its declared budget");
        ++census.histogram[eta];
    }
    census.class_count = census.histogram.size();

    // Class is "small" iff |F| < 2^{0.548 kn}  <=>  |F|^250 < 2^{137 kn}.
    const BigInt small_rhs = BigInt(1) << (137 * p.total_bits());
    BigInt small_mass = 0;
    for (const auto& [eta, size] : census.histogram) {
        if (pow(BigInt(size), 250) < small_rhs) small_mass += size;
    }
    census.prob_small = Rational(small_mass, BigInt(1) << p.total_bits());
    census.lemma9_rhs_log2 = -0.002 * double(p.total_bits());
    // prob_small <= 2^{-0.002 kn}  <=>  small_mass^500 <= 2^{499 kn}.
    census.inequality_holds =
        pow(small_mass, 500) <= (BigInt(1) << (499 * p.total_bits()));
    return census;
}

BoundsReport security_bounds(const Params& p) {
    const double kn = double(p.total_bits());
    const double k = double(p.k());
    BoundsReport r;
    r.prop1_bound_log2 = log2_add(-k / 6.0, -0.002 * kn + 1.0);
    r.theorem1_bound_log2 =
        std::log2(double(p.m())) + log2_add(-k / 6.0 + 1.0, -0.002 * kn + 2.0);
    r.lemma2_bound_log2 = 0.544 * kn;
    r.lemma8_bound_log2 = 0.544 * kn + k / 3.0;
    r.lemma9_rhs_log2 = -0.002 * kn;
    r.h_eighth = (1.0 / 8.0) * std::log2(8.0) + (7.0 / 8.0) * std::log2(8.0 / 7.0);
    r.stirling_tail_log2 = -kn * (1.0 - r.h_eighth) + 1.0;
    r.vacuous = r.theorem1_bound_log2 >= 0.0;
    return r;
}

IndependenceReport independence_check(const Params& p) {
    require_string_enum(p, 16, "independence_check");
    require_key_enum(p, kMaxSpectrumKeys, "independence_check");

    const uint64_t K = p.key_count();
    const uint64_t string_total = uint64_t(1) << p.total_bits();
    const uint64_t m = p.m();
    const uint64_t outcomes = uint64_t(1) << m;

    // joint[z][x] = #strings with X(alpha, Z_z) = x.
    std::vector<std::vector<uint64_t>> joint(K, std::vector<uint64_t>(outcomes, 0));
    for (uint64_t zt = 0; zt < K; ++zt) {
        SecretKey z = key_from_index(zt, p);
        for (uint64_t t = 0; t < string_total; ++t) {
            RandomString alpha = string_from_index(t, p);
            FinalKey x = expand_key(alpha, z, p);
            uint64_t idx = 0;
            for (uint64_t b = 0; b < m; ++b) idx |= uint64_t(x.get(b)) << b;
            ++joint[zt][idx];
        }
    }

    IndependenceReport report;
    report.joint_product_form_ok = true;
    report.xminusi_z_invariant_ok = true;

    // Product form, per key: joint[x] * total^{m-1} == prod_i marginal_i[x_i].
    for (uint64_t zt = 0; zt < K && report.joint_product_form_ok; ++zt) {
        std::vector<std::array<uint64_t, 2>> marg(m, std::array<uint64_t, 2>{0, 0});
        for (uint64_t x = 0; x < outcomes; ++x)
            for (uint64_t b = 0; b < m; ++b) marg[b][(x >> b) & 1] += joint[zt][x];
        const BigInt total_pow = pow(BigInt(string_total), unsigned(m - 1));
        for (uint64_t x = 0; x < outcomes; ++x) {
            BigInt lhs = BigInt(joint[zt][x]) * total_pow;
            BigInt rhs = 1;
            for (uint64_t b = 0; b < m; ++b) rhs *= BigInt(marg[b][(x >> b) & 1]);
            if (lhs != rhs) {
                report.joint_product_form_ok = false;
                break;
            }
        }
    }

    // Law of X^{-i} identical for every Z, for each i.
    for (uint64_t i = 1; i <= m && report.xminusi_z_invariant_ok; ++i) {
        const uint64_t rest = outcomes >> 1;
        std::vector<uint64_t> baseline(rest, 0);
        for (uint64_t zt = 0; zt < K; ++zt) {
            std::vector<uint64_t> dist(rest, 0);
            for (uint64_t x = 0; x < outcomes; ++x) {
                uint64_t low = x & ((uint64_t(1) << (i - 1)) - 1);
                uint64_t high = (x >> i) << (i - 1);
                dist[low | high] += joint[zt][x];
            }
            if (zt == 0)
                baseline = dist;
            else if (dist != baseline) {
                report.xminusi_z_invariant_ok = false;
                break;
            }
        }
    }
    return report;
}

std::string rational_to_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string census_json(const std::string& quantity, const Params& p,
                        const std::optional<std::string>& exact, double bound_log2,
                        const std::string& method) {
    nlohmann::json j;
    j["quantity"] = quantity;
    j["params"] = params_json(p);
    if (exact)
        j["exact"] = *exact;
    else
        j["exact"] = nullptr;
    j["bound_log2"] = bound_log2;
    j["method"] = method;
    return j.dump();
}

std::string BoundsReport::to_json(const Params& p) const {
    nlohmann::json j;
    j["quantity"] = "security_bounds";
    j["params"] = params_json(p);
    j["exact"] = nullptr;
    j["bound_log2"] = theorem1_bound_log2;
    j["method"] = "closed-form-log2";
    j["theorem1_bound_log2"] = theorem1_bound_log2;
    j["prop1_bound_log2"] = prop1_bound_log2;
    j["lemma2_bound_log2"] = lemma2_bound_log2;
    j["lemma8_bound_log2"] = lemma8_bound_log2;
    j["lemma9_rhs_log2"] = lemma9_rhs_log2;
    j["stirling_tail_log2"] = stirling_tail_log2;
    j["h_eighth"] = h_eighth;
    j["vacuous"] = vacuous;
    return j.dump();
}

} // namespace bsm
