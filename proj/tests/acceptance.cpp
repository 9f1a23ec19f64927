// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bsm/adversary.hpp"
#include "bsm/analysis.hpp"

using namespace bsm;

namespace {

struct Criterion {
    std::string name;
    double time_limit_s;  // 0 = no stated limit
    std::function<bool(std::string&)> run;
};

RandomString random_string(std::mt19937_64& rng, uint64_t n, uint32_t k) {
    return RandomString(n, k, random_bits(rng, n * k));
}

SecretKey random_key(std::mt19937_64& rng, const Params& p) {
    SecretKey z;
    for (uint32_t j = 0; j < p.k(); ++j) z.z.push_back(uniform_below(rng, p.n()));
    return z;
}

// 1. Bounds reproduction at the paper's parameters.
bool c01_bounds(std::string& detail) {
    Params p = Params::create(uint64_t(1) << 45, 300, uint64_t(1) << 25);
    BoundsReport r = security_bounds(p);
    std::ostringstream os;
    os << "theorem1_log2=" << r.theorem1_bound_log2;
    detail = os.str();
    return r.theorem1_bound_log2 <= -23.0 && std::abs(r.theorem1_bound_log2 + 24.0) <= 0.1;
}

// 2. 1000 random round trips with n <= 64, k <= 8, m <= n.
bool c02_round_trip(std::string& detail) {
    auto rng = make_engine(0xacc2);
    uint64_t failures = 0;
    for (int t = 0; t < 1000; ++t) {
        uint64_t n = 1 + uniform_below(rng, 64);
        uint32_t k = uint32_t(1 + uniform_below(rng, 8));
        uint64_t m = 1 + uniform_below(rng, n);
        Params p = Params::create(n, k, m);
        RandomString alpha = random_string(rng, n, k);
        SecretKey z = random_key(rng, p);
        Message msg = random_bits(rng, m);
        FinalKey x = expand_key(alpha, z, p);
        if (decrypt(encrypt(msg, x), x) != msg) ++failures;
    }
    detail = "1000 instances, " + std::to_string(failures) + " failures";
    return failures == 0;
}

// 3. Exhaustive disjointness: |key_positions| = m*k for all Z, n <= 8, k <= 3, m = n.
bool c03_disjointness(std::string& detail) {
    uint64_t checked = 0, failures = 0;
    for (uint64_t n = 1; n <= 8; ++n) {
        for (uint32_t k = 1; k <= 3; ++k) {
            Params p = Params::create(n, k, n);
            for (uint64_t zt = 0; zt < p.key_count(); ++zt) {
                SecretKey z = key_from_index(zt, p);
                ++checked;
                if (key_positions(z, p).size() != n * k) ++failures;
            }
        }
    }
    detail = std::to_string(checked) + " keys, " + std::to_string(failures) + " failures";
    return failures == 0;
}

const std::vector<std::pair<uint64_t, uint32_t>> kExhaustivePairs = {
    {2, 2}, {3, 2}, {2, 3}, {4, 2}, {3, 3}};

// 4. Discrepancy oracle equivalence, exhaustive plus 1000 random at (16,3).
bool c04_discrepancy_oracles(std::string& detail) {
    uint64_t mismatches = 0, cases = 0;
    for (auto [n, k] : kExhaustivePairs) {
        Params p = Params::create(n, k, n);
        const uint64_t total = uint64_t(1) << p.total_bits();
        for (uint64_t t = 0; t < total; ++t) {
            RandomString alpha = string_from_index(t, p);
            ++cases;
            if (discrepancy_bruteforce(alpha, 1, p).value !=
                discrepancy_closed_form(alpha).value)
                ++mismatches;
        }
    }
    Params p16 = Params::create(16, 3, 16);
    auto rng = make_engine(0xacc4);
    for (int t = 0; t < 1000; ++t) {
        RandomString alpha = random_string(rng, 16, 3);
        ++cases;
        if (discrepancy_bruteforce(alpha, 1, p16).value != discrepancy_closed_form(alpha).value)
            ++mismatches;
    }
    detail = std::to_string(cases) + " strings, " + std::to_string(mismatches) + " mismatches";
    return mismatches == 0;
}

// 5. i-invariance of d over the same exhaustive sets with m = n.
bool c05_i_invariance(std::string& detail) {
    uint64_t failures = 0, cases = 0;
    for (auto [n, k] : kExhaustivePairs) {
        Params p = Params::create(n, k, n);
        const uint64_t total = uint64_t(1) << p.total_bits();
        for (uint64_t t = 0; t < total; ++t) {
            ++cases;
            if (!discrepancy_i_invariance_check(string_from_index(t, p), p)) ++failures;
        }
    }
    detail = std::to_string(cases) + " strings, " + std::to_string(failures) + " failures";
    return failures == 0;
}

// 6. Lemma-1 band: 1000 banded strings at n=32,k=6 satisfy d <= K*2^{-k/3}.
bool c06_band(std::string& detail) {
    Params p = Params::create(32, 6, 1);
    auto rng = make_engine(0xacc6);
    uint64_t failures = 0;
    int accepted = 0;
    while (accepted < 1000) {
        RandomString alpha = random_string(rng, 32, 6);
        DiscrepancyResult r = discrepancy_closed_form(alpha);
        if (!r.row_fractions_in_band) continue;
        ++accepted;
        if (discrepancy_over_threshold(r.value, p)) ++failures;
    }
    detail = "1000 banded strings, " + std::to_string(failures) + " over threshold";
    return failures == 0;
}

// 7. Goodness identity: counted success equals 1/2 + ip/(2K) exactly.
bool c07_goodness(std::string& detail) {
    uint64_t failures = 0, cases = 0;
    for (auto [n, k] : std::vector<std::pair<uint64_t, uint32_t>>{{2, 2}, {3, 2}}) {
        Params p = Params::create(n, k, 1);
        const uint64_t K = p.key_count();
        for (int v = 0; v < 200; ++v) {
            auto rng = make_engine(hash_combine(0xacc7, uint64_t(v) | (n << 32)));
            RandomString alpha = random_string(rng, n, k);
            BitVec guesses = random_bits(rng, K);
            GoodnessRecord rec = goodness(guesses, spectrum(alpha, 1, p), p);
            uint64_t matches = 0;
            for (uint64_t zt = 0; zt < K; ++zt) {
                SecretKey z = key_from_index(zt, p);
                if (keystream_bit(alpha, derive_subkey(z, 1, p)) == guesses.get(zt)) ++matches;
            }
            ++cases;
            if (Rational(matches, K) != rec.success_probability) ++failures;
        }
    }
    detail = std::to_string(cases) + " vectors, " + std::to_string(failures) + " failures";
    return failures == 0;
}

// 8. Grammian identities, exhaustive at nk <= 10.
bool c08_grammian(std::string& detail) {
    uint64_t failures = 0;
    for (auto [n, k] : std::vector<std::pair<uint64_t, uint32_t>>{
             {2, 2}, {3, 2}, {2, 3}, {4, 2}, {5, 2}, {2, 5}}) {
        Params p = Params::create(n, k, 1);
        const uint64_t total = uint64_t(1) << p.total_bits();
        const uint64_t K = p.key_count();

        std::vector<SpectrumVector> spectra;
        spectra.reserve(total);
        std::vector<BigInt> xor_d(total);
        for (uint64_t t = 0; t < total; ++t) {
            spectra.push_back(spectrum(string_from_index(t, p), 1, p));
            xor_d[t] = discrepancy_bruteforce(string_from_index(t, p), 1, p).value;
        }
        BigInt d_size = enumerate_D(p).size_of_D;

        std::vector<std::vector<int64_t>> delta(total, std::vector<int64_t>(total));
        for (uint64_t a = 0; a < total; ++a)
            for (uint64_t b = 0; b < total; ++b) {
                int64_t dot = 0;
                for (uint64_t t = 0; t < K; ++t)
                    dot += int64_t(spectra[a].entries[t]) * spectra[b].entries[t];
                delta[a][b] = dot;
            }

        for (uint64_t a = 0; a < total; ++a) {
            if (delta[a][a] != int64_t(K)) ++failures;
            uint64_t over = 0;
            for (uint64_t b = 0; b < total; ++b) {
                if (delta[a][b] != delta[b][a]) ++failures;
                BigInt abs_d(delta[a][b] < 0 ? -delta[a][b] : delta[a][b]);
                if (abs_d != xor_d[a ^ b]) ++failures;
                if (discrepancy_over_threshold(abs_d, p)) ++over;
            }
            if (BigInt(over) != d_size) ++failures;
        }
    }
    detail = std::to_string(failures) + " identity violations";
    return failures == 0;
}

// 9. Pre-image counting inequality and prefix histogram shape at nk <= 16.
bool c09_preimage(std::string& detail) {
    uint64_t failures = 0, recorders = 0;
    for (auto [n, k] : std::vector<std::pair<uint64_t, uint32_t>>{{4, 2}, {8, 2}}) {
        Params p = Params::create(n, k, 1);
        std::vector<Recorder> recs;
        recs.push_back(make_prefix_recorder(p.beta()));
        recs.push_back(make_parity_recorder(p.beta(), p.total_bits()));
        for (uint64_t s = 0; s < 20; ++s)
            recs.push_back(make_hash_recorder(p.beta(), hash_combine(0xacc9, s)));
        for (const auto& rec : recs) {
            ++recorders;
            PreimageCensus census = preimage_census(rec, p);
            if (!census.inequality_holds) ++failures;
            if (rec.name == "prefix") {
                const uint64_t expected = uint64_t(1) << (p.total_bits() - p.beta());
                if (census.class_count != (uint64_t(1) << p.beta())) ++failures;
                for (const auto& [eta, size] : census.histogram)
                    if (size != expected) ++failures;
            }
        }
    }
    detail = std::to_string(recorders) + " recorders, " + std::to_string(failures) + " failures";
    return failures == 0;
}

// 10. Independence lemmas by exhaustive rational enumeration.
bool c10_independence(std::string& detail) {
    uint64_t failures = 0;
    for (auto [n, k, m] : std::vector<std::tuple<uint64_t, uint32_t, uint64_t>>{
             {2, 1, 2}, {4, 2, 2}, {4, 2, 4}}) {
        IndependenceReport r = independence_check(Params::create(n, k, m));
        if (!r.joint_product_form_ok || !r.xminusi_z_invariant_ok) ++failures;
    }
    detail = "3 instances, " + std::to_string(failures) + " failures";
    return failures == 0;
}

// 11. Monte-Carlo at 1e5 trials matches exact enumeration within 3 sigma.
bool c11_exact_vs_monte_carlo(std::string& detail) {
    Params p = Params::create(2, 2, 1);
    std::vector<Recorder> recs = {make_zero_recorder(), make_prefix_recorder(p.beta()),
                                  make_parity_recorder(p.beta(), p.total_bits())};
    std::ostringstream os;
    bool ok = true;
    for (const auto& rec : recs) {
        GameOptions opts;
        opts.compute_exact_if_feasible = false;
        BitDecoder bayes = bayes_optimal_decoder(rec, p, opts);
        Rational exact = exact_bit_advantage(rec, bayes, p, 1, opts);
        GameResult mc = bit_security_game(rec, bayes, p, 1, 100000,
                                          seed_from_string("acceptance-11"), opts);
        double exact_d =
            numerator(exact).convert_to<double>() / denominator(exact).convert_to<double>();
        double gap = std::abs(mc.estimate - exact_d);
        os << rec.name << ": exact=" << rational_to_string(exact)
           << " estimate=" << mc.estimate << "  ";
        if (gap > 3.0 * mc.std_error) ok = false;
    }
    detail = os.str();
    return ok;
}

// 12. Reduction inequality for 20 sampled distinguishers at n=2,k=2,m=2.
bool c12_reduction(std::string& detail) {
    Params p = Params::create(2, 2, 2);
    Recorder prefix = make_prefix_recorder(p.beta());
    uint64_t failures = 0;
    for (uint64_t salt = 0; salt < 20; ++salt) {
        Message m0 = BitVec::from_string(salt % 2 == 0 ? "00" : "10");
        Message m1 = BitVec::from_string("11");
        ReductionReport rep =
            verify_reduction(prefix, make_hash_distinguisher(salt), m0, m1, p);
        if (!rep.inequality_holds) ++failures;
    }
    detail = "20 distinguishers, " + std::to_string(failures) + " failures";
    return failures == 0;
}

// 13. Budget enforcement: over-emitting recorders never produce a result.
bool c13_budget(std::string& detail) {
    Params p = Params::create(4, 2, 1);
    uint64_t escapes = 0;
    for (uint64_t v = 0; v < 100; ++v) {
        Recorder bad;
        bad.name = "adversarial-" + std::to_string(v);
        bad.declared_budget = p.beta();
        uint64_t salt = hash_combine(0xacc13, v);
        bad.behavior = [salt, &p](const RandomString& alpha) {
            BitVec out(p.beta() + 1);
            auto bytes = alpha.bits().to_bytes();
            for (uint64_t b = 0; b < out.size(); ++b)
                out.set(b, hash_bytes(bytes.data(), bytes.size(), hash_combine(salt, b)) & 1);
            return out;
        };
        try {
            bit_security_game(bad, make_constant_decoder(false), p, 1, 5,
                              seed_from_string("acceptance-13"));
            ++escapes;  // a result came back: the bound was not enforced
        } catch (const Error& e) {
            if (e.code() != errc::storage_exceeded) ++escapes;
        }
    }
    detail = "100 adversarial recorders, " + std::to_string(escapes) + " escapes";
    return escapes == 0;
}

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"bounds-reproduction", 1.0, c01_bounds},
        {"round-trip-suite", 10.0, c02_round_trip},
        {"disjointness-exhaustive", 0.0, c03_disjointness},
        {"discrepancy-oracle-equivalence", 60.0, c04_discrepancy_oracles},
        {"i-invariance", 0.0, c05_i_invariance},
        {"per-row-band", 0.0, c06_band},
        {"goodness-identity", 0.0, c07_goodness},
        {"grammian-identities", 0.0, c08_grammian},
        {"preimage-inequality", 0.0, c09_preimage},
        {"independence-lemmas", 0.0, c10_independence},
        {"exact-vs-monte-carlo", 60.0, c11_exact_vs_monte_carlo},
        {"reduction-inequality", 0.0, c12_reduction},
        {"budget-enforcement", 0.0, c13_budget},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        std::string detail;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0 && elapsed > c.time_limit_s) {
            ok = false;
            detail += " [exceeded " + std::to_string(c.time_limit_s) + "s limit]";
        }
        if (!ok) ++failures;
        std::printf("[%2zu/13] %s %-32s (%.2fs) %s\n", i + 1, ok ? "PASS" : "FAIL",
                    c.name.c_str(), elapsed, detail.c_str());
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
