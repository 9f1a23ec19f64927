#include "bsm/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "bsm/analysis.hpp"

namespace bsm {

namespace {

using boost::multiprecision::cpp_int;

uint64_t game_budget(const Params& p, const GameOptions& opts) {
    return opts.unsafe_test_override_budget.value_or(p.beta());
}

void require_exact_enum(const Params& p, const char* who) {
    if (!p.strings_enumerable(kMaxExactAdvantageBits))
        fail(errc::too_large_to_enumerate,
             std::string(who) + " needs k*n <= " + std::to_string(kMaxExactAdvantageBits));
    if (!p.keys_enumerable(kMaxSpectrumKeys))
        fail(errc::too_large_to_enumerate, std::string(who) + " needs n^k <= 2^20");
}

bool exact_feasible(const Params& p) {
    if (!p.strings_enumerable(kMaxExactAdvantageBits) || !p.keys_enumerable(kMaxSpectrumKeys))
        return false;
    // Auto-attached exact values stay cheap even when the decoder itself
    // enumerates (the bayes decoder costs another 2^{nk} per pair); anything
    // bigger needs an explicit request.
    double work = double(p.total_bits()) + p.log2_key_count();
    return work <= 16.0;
}

BitVec drop_bit(const BitVec& x, uint64_t i) {
    BitVec out(x.size() - 1);
    uint64_t w = 0;
    for (uint64_t b = 0; b < x.size(); ++b) {
        if (b + 1 == i) continue;
        out.set(w++, x.get(b));
    }
    return out;
}

SecretKey sample_key(std::mt19937_64& rng, const Params& p) {
    SecretKey z;
    z.z.resize(p.k());
    for (uint32_t j = 0; j < p.k(); ++j) z.z[j] = uniform_below(rng, p.n());
    return z;
}

RandomString sample_string(std::mt19937_64& rng, const Params& p) {
    return RandomString(p.n(), p.k(), random_bits(rng, p.total_bits()));
}

uint64_t hash_inputs(const BitVec& a, const SecretKey& z, const BitVec& b, uint64_t extra,
                     uint64_t salt) {
    uint64_t h = salt;
    auto ab = a.to_bytes();
    h = hash_bytes(ab.data(), ab.size(), h ^ a.size());
    for (uint64_t c : z.z) h = hash_combine(h, c);
    auto bb = b.to_bytes();
    h = hash_bytes(bb.data(), bb.size(), h ^ b.size());
    return hash_combine(h, extra);
}

double binomial_std_error(uint64_t successes, uint64_t trials) {
    if (trials == 0) return 0.0;
    double phat = double(successes) / double(trials);
    return std::sqrt(phat * (1.0 - phat) / double(trials));
}

} // namespace

StoredState run_phase1(const Recorder& rec, const RandomString& alpha, uint64_t budget) {
    BitVec out = rec.behavior(alpha);
    if (out.size() > budget)
        fail(errc::storage_exceeded, "recorder \"" + rec.name + "\" emitted " +
                                         std::to_string(out.size()) + " bits, budget " +
                                         std::to_string(budget));
    return out;
}

StoredState run_phase1(const Recorder& rec, BitSource& alpha_stream, const Params& p,
                       uint64_t budget) {
    // The adversary sees the whole broadcast; only the amount retained at the
    // end of Phase I is constrained.
    BitVec bits(p.total_bits());
    for (uint64_t pos = 0; pos < p.total_bits(); ++pos) {
        int b = alpha_stream.next();
        if (b < 0) fail(errc::stream_truncated, "broadcast ended before k*n bits");
        bits.set(pos, b != 0);
    }
    return run_phase1(rec, RandomString(p.n(), p.k(), std::move(bits)), budget);
}

GameResult bit_security_game(const Recorder& rec, const BitDecoder& dec, const Params& p,
                             uint64_t i, uint64_t trials, const Seed32& seed,
                             const GameOptions& opts) {
    if (i < 1 || i > p.m()) fail(errc::index_out_of_range, "message-bit index must lie in [1, m]");
    if (trials == 0) fail(errc::invalid_argument, "trials must be >= 1");
    const uint64_t budget = game_budget(p, opts);

    uint64_t successes = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        auto rng = make_engine(substream_seed(seed, t));
        RandomString alpha = sample_string(rng, p);
        SecretKey z = sample_key(rng, p);
        StoredState eta = run_phase1(rec, alpha, budget);
        FinalKey x = expand_key(alpha, z, p);
        BitVec x_minus_i = drop_bit(x, i);
        if (dec.behavior(eta, z, x_minus_i, i) == x.get(i - 1)) ++successes;
    }

    GameResult r;
    r.game = "bit";
    r.trials = trials;
    r.successes = successes;
    r.estimate = double(successes) / double(trials);
    r.std_error = binomial_std_error(successes, trials);
    r.bound = 0.5 + std::exp2(-double(p.k()) / 6.0) +
              std::exp2(-0.002 * double(p.total_bits()) + 1.0);
    if (opts.compute_exact_if_feasible && exact_feasible(p))
        r.exact = exact_bit_advantage(rec, dec, p, i, opts);
    return r;
}

Rational exact_bit_advantage(const Recorder& rec, const BitDecoder& dec, const Params& p,
                             uint64_t i, const GameOptions& opts) {
    require_exact_enum(p, "exact_bit_advantage");
    if (i < 1 || i > p.m()) fail(errc::index_out_of_range, "message-bit index must lie in [1, m]");
    const uint64_t budget = game_budget(p, opts);

    const uint64_t string_total = uint64_t(1) << p.total_bits();
    const uint64_t key_total = p.key_count();
    cpp_int successes = 0;
    for (uint64_t t = 0; t < string_total; ++t) {
        RandomString alpha = string_from_index(t, p);
        StoredState eta = run_phase1(rec, alpha, budget);
        for (uint64_t zt = 0; zt < key_total; ++zt) {
            SecretKey z = key_from_index(zt, p);
            FinalKey x = expand_key(alpha, z, p);
            BitVec x_minus_i = drop_bit(x, i);
            if (dec.behavior(eta, z, x_minus_i, i) == x.get(i - 1)) ++successes;
        }
    }
    return Rational(successes, cpp_int(string_total) * key_total);
}

BitDecoder bayes_optimal_decoder(const Recorder& rec, const Params& p, const GameOptions& opts) {
    require_exact_enum(p, "bayes_optimal_decoder");
    const uint64_t budget = game_budget(p, opts);

    BitDecoder dec;
    dec.name = "bayes[" + rec.name + "]";
    dec.behavior = [rec, p, budget](const StoredState& eta, const SecretKey& z,
                                    const BitVec& x_minus_i, uint64_t i) -> bool {
        const uint64_t string_total = uint64_t(1) << p.total_bits();
        uint64_t zeros = 0, ones = 0;
        for (uint64_t t = 0; t < string_total; ++t) {
            RandomString alpha = string_from_index(t, p);
            if (run_phase1(rec, alpha, budget) != eta) continue;
            FinalKey x = expand_key(alpha, z, p);
            if (drop_bit(x, i) != x_minus_i) continue;
            if (x.get(i - 1))
                ++ones;
            else
                ++zeros;
        }
        if (zeros == 0 && ones == 0)
            fail(errc::empty_preimage, "no string is consistent with (eta, Z, X^{-i})");
        return ones > zeros;  // ties -> 0
    };
    return dec;
}

GameResult semantic_security_game(const Recorder& rec, const Distinguisher& dist,
                                  const Message& m0, const Message& m1, const Params& p,
                                  uint64_t trials, const Seed32& seed, const GameOptions& opts) {
    if (m0.size() != p.m() || m1.size() != p.m())
        fail(errc::length_mismatch, "messages must have exactly m bits");
    if (trials == 0) fail(errc::invalid_argument, "trials must be >= 1");
    const uint64_t budget = game_budget(p, opts);

    // Paired estimator: both encryptions share (alpha, Z) within a trial.
    int64_t diff_sum = 0;
    uint64_t diff_nonzero = 0;
    for (uint64_t t = 0; t < trials; ++t) {
        auto rng = make_engine(substream_seed(seed, t));
        RandomString alpha = sample_string(rng, p);
        SecretKey z = sample_key(rng, p);
        StoredState zeta = run_phase1(rec, alpha, budget);
        FinalKey x = expand_key(alpha, z, p);
        int d1 = dist.behavior(zeta, z, encrypt(m1, x)) ? 1 : 0;
        int d0 = dist.behavior(zeta, z, encrypt(m0, x)) ? 1 : 0;
        diff_sum += d1 - d0;
        if (d1 != d0) ++diff_nonzero;
    }

    GameResult r;
    r.game = "semantic";
    r.trials = trials;
    r.successes = uint64_t(diff_sum < 0 ? -diff_sum : diff_sum);
    r.estimate = double(r.successes) / double(trials);
    if (trials > 1) {
        double mean = double(diff_sum) / double(trials);
        double var = (double(diff_nonzero) - double(trials) * mean * mean) / double(trials - 1);
        r.std_error = std::sqrt(std::max(var, 0.0) / double(trials));
    }
    r.bound = double(p.m()) * (std::exp2(-double(p.k()) / 6.0 + 1.0) +
                               std::exp2(-0.002 * double(p.total_bits()) + 2.0));
    if (opts.compute_exact_if_feasible && exact_feasible(p))
        r.exact = exact_distinguisher_advantage(rec, dist, m0, m1, p, opts);
    return r;
}

Rational exact_distinguisher_advantage(const Recorder& rec, const Distinguisher& dist,
                                       const Message& m0, const Message& m1, const Params& p,
                                       const GameOptions& opts) {
    require_exact_enum(p, "exact_distinguisher_advantage");
    if (m0.size() != p.m() || m1.size() != p.m())
        fail(errc::length_mismatch, "messages must have exactly m bits");
    const uint64_t budget = game_budget(p, opts);

    const uint64_t string_total = uint64_t(1) << p.total_bits();
    const uint64_t key_total = p.key_count();
    cpp_int ones_m1 = 0, ones_m0 = 0;
    for (uint64_t t = 0; t < string_total; ++t) {
        RandomString alpha = string_from_index(t, p);
        StoredState zeta = run_phase1(rec, alpha, budget);
        for (uint64_t zt = 0; zt < key_total; ++zt) {
            SecretKey z = key_from_index(zt, p);
            FinalKey x = expand_key(alpha, z, p);
            if (dist.behavior(zeta, z, encrypt(m1, x))) ++ones_m1;
            if (dist.behavior(zeta, z, encrypt(m0, x))) ++ones_m0;
        }
    }
    cpp_int num = ones_m1 - ones_m0;
    if (num < 0) num = -num;
    return Rational(num, cpp_int(string_total) * key_total);
}

BitDecoder reduction_bit_predictor(const Distinguisher& dist, const Message& m0,
                                   const Message& m1, uint64_t i, bool guess_bit) {
    if (m0 == m1) fail(errc::identical_messages, "reduction needs two distinct messages");
    if (i < 1 || i > m0.size() || m0.get(i - 1) == m1.get(i - 1))
        fail(errc::index_out_of_range, "i must point at a position where the messages differ");

    // Hybrid H^{(i-1)} = (m1_1..m1_{i-1}, m0_i..m0_m). The crafted ciphertext
    // carries H^{(i-1)} xor X away from position i and the planted guess at i.
    Message hybrid = m0;
    for (uint64_t b = 0; b + 1 < i; ++b) hybrid.set(b, m1.get(b));

    BitDecoder dec;
    dec.name = "hybrid-predictor";
    dec.behavior = [dist, m0, m1, hybrid, guess_bit](const StoredState& eta, const SecretKey& z,
                                                     const BitVec& x_minus_i,
                                                     uint64_t i) -> bool {
        Ciphertext c(hybrid.size());
        uint64_t w = 0;
        for (uint64_t b = 0; b < hybrid.size(); ++b) {
            if (b + 1 == i) {
                c.set(b, guess_bit);
            } else {
                c.set(b, hybrid.get(b) ^ x_minus_i.get(w));
                ++w;
            }
        }
        bool says_m1 = dist.behavior(eta, z, c);
        return guess_bit ^ (says_m1 ? m1.get(i - 1) : m0.get(i - 1));
    };
    return dec;
}

ReductionReport verify_reduction(const Recorder& rec, const Distinguisher& dist,
                                 const Message& m0, const Message& m1, const Params& p,
                                 const GameOptions& opts) {
    if (m0 == m1) fail(errc::identical_messages, "reduction needs two distinct messages");
    ReductionReport report;
    report.epsilon = exact_distinguisher_advantage(rec, dist, m0, m1, p, opts);
    report.required = report.epsilon / (Rational(2) * p.m());

    report.best_advantage = 0;
    const Rational half(1, 2);
    for (uint64_t i = 1; i <= p.m(); ++i) {
        if (m0.get(i - 1) == m1.get(i - 1)) continue;
        for (int b = 0; b <= 1; ++b) {
            BitDecoder dec = reduction_bit_predictor(dist, m0, m1, i, b != 0);
            Rational success = exact_bit_advantage(rec, dec, p, i, opts);
            Rational adv = success >= half ? success - half : half - success;
            if (adv > report.best_advantage) {
                report.best_advantage = adv;
                report.best_i = i;
                report.best_guess_bit = (b != 0);
            }
        }
    }
    report.inequality_holds = report.best_advantage >= report.required;
    return report;
}

// --- named constructions ---

Recorder make_zero_recorder() {
    Recorder r;
    r.name = "zero";
    r.declared_budget = 0;
    r.behavior = [](const RandomString&) { return BitVec(); };
    return r;
}

Recorder make_prefix_recorder(uint64_t budget) {
    Recorder r;
    r.name = "prefix";
    r.declared_budget = budget;
    r.behavior = [budget](const RandomString& alpha) {
        uint64_t len = std::min(budget, alpha.bits().size());
        BitVec out(len);
        for (uint64_t b = 0; b < len; ++b) out.set(b, alpha.bits().get(b));
        return out;
    };
    return r;
}

Recorder make_parity_recorder(uint64_t budget, uint64_t total_bits) {
    Recorder r;
    r.name = "parity";
    r.declared_budget = budget;
    uint64_t len = std::min(budget, total_bits);
    r.behavior = [len](const RandomString& alpha) {
        BitVec out(len);
        if (len == 0) return out;
        const BitVec& bits = alpha.bits();
        for (uint64_t b = 0; b < bits.size(); ++b)
            if (bits.get(b)) out.set(b % len, !out.get(b % len));
        return out;
    };
    return r;
}

Recorder make_hash_recorder(uint64_t budget, uint64_t salt) {
    Recorder r;
    r.name = "hash";
    r.declared_budget = budget;
    r.behavior = [budget, salt](const RandomString& alpha) {
        auto bytes = alpha.bits().to_bytes();
        BitVec out(budget);
        for (uint64_t b = 0; b < budget; ++b) {
            uint64_t h = hash_bytes(bytes.data(), bytes.size(), hash_combine(salt, b));
            out.set(b, h & 1);
        }
        return out;
    };
    return r;
}

BitDecoder make_constant_decoder(bool bit) {
    BitDecoder d;
    d.name = bit ? "constant1" : "constant0";
    d.behavior = [bit](const StoredState&, const SecretKey&, const BitVec&, uint64_t) {
        return bit;
    };
    return d;
}

BitDecoder make_hash_decoder(uint64_t salt) {
    BitDecoder d;
    d.name = "random";
    d.behavior = [salt](const StoredState& eta, const SecretKey& z, const BitVec& x_minus_i,
                        uint64_t i) { return (hash_inputs(eta, z, x_minus_i, i, salt) & 1) != 0; };
    return d;
}

BitDecoder make_recompute_decoder(const Params& p) {
    BitDecoder d;
    d.name = "recompute";
    d.behavior = [p](const StoredState& eta, const SecretKey& z, const BitVec&,
                     uint64_t i) -> bool {
        if (eta.size() != p.total_bits())
            fail(errc::dimension_mismatch,
                 "recompute decoder needs the full string as stored state");
        RandomString alpha(p.n(), p.k(), eta);
        return keystream_bit(alpha, derive_subkey(z, i, p));
    };
    return d;
}

Distinguisher make_constant_distinguisher(bool bit) {
    Distinguisher d;
    d.name = bit ? "constant1" : "constant0";
    d.behavior = [bit](const StoredState&, const SecretKey&, const Ciphertext&) { return bit; };
    return d;
}

Distinguisher make_hash_distinguisher(uint64_t salt) {
    Distinguisher d;
    d.name = "random";
    d.behavior = [salt](const StoredState& zeta, const SecretKey& z, const Ciphertext& c) {
        return (hash_inputs(zeta, z, c, 0x5eed, salt) & 1) != 0;
    };
    return d;
}

Distinguisher make_recompute_distinguisher(const Params& p, const Message& m1) {
    Distinguisher d;
    d.name = "recompute";
    d.behavior = [p, m1](const StoredState& zeta, const SecretKey& z,
                         const Ciphertext& c) -> bool {
        if (zeta.size() != p.total_bits())
            fail(errc::dimension_mismatch,
                 "recompute distinguisher needs the full string as stored state");
        RandomString alpha(p.n(), p.k(), zeta);
        FinalKey x = expand_key(alpha, z, p);
        return decrypt(c, x) == m1;
    };
    return d;
}

Recorder recorder_by_name(const std::string& name, const Params& p, uint64_t budget,
                          uint64_t salt) {
    if (name == "zero") return make_zero_recorder();
    if (name == "prefix") return make_prefix_recorder(budget);
    if (name == "parity") return make_parity_recorder(budget, p.total_bits());
    if (name == "hash") return make_hash_recorder(budget, salt);
    fail(errc::unknown_selector, "unknown recorder: " + name);
}

BitDecoder decoder_by_name(const std::string& name, const Recorder& rec, const Params& p,
                           uint64_t salt, const GameOptions& opts) {
    if (name == "random") return make_hash_decoder(salt);
    if (name == "constant0") return make_constant_decoder(false);
    if (name == "constant1") return make_constant_decoder(true);
    if (name == "recompute") return make_recompute_decoder(p);
    if (name == "bayes") return bayes_optimal_decoder(rec, p, opts);
    fail(errc::unknown_selector, "unknown decoder: " + name);
}

Distinguisher distinguisher_by_name(const std::string& name, const Params& p,
                                    const Message& m0, const Message& m1, uint64_t salt) {
    (void)m0;
    if (name == "random") return make_hash_distinguisher(salt);
    if (name == "constant0") return make_constant_distinguisher(false);
    if (name == "constant1") return make_constant_distinguisher(true);
    if (name == "recompute") return make_recompute_distinguisher(p, m1);
    fail(errc::unknown_selector, "unknown distinguisher: " + name);
}

std::string GameResult::to_json(const Params& p) const {
    nlohmann::json j;
    j["game"] = game;
    j["params"] = {{"n", p.n()}, {"k", p.k()}, {"m", p.m()}, {"gamma", p.gamma()}};
    j["trials"] = trials;
    j["successes"] = successes;
    j["estimate"] = estimate;
    j["std_error"] = std_error;
    if (exact)
        j["exact"] = rational_to_string(*exact);
    else
        j["exact"] = nullptr;
    j["bound"] = bound;
    j["seed"] = seed;
    return j.dump();
}

} // namespace bsm
