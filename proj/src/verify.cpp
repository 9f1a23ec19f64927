#include "bsm/verify.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "bsm/analysis.hpp"
#include "bsm/rng.hpp"

namespace bsm {

namespace {

using boost::multiprecision::cpp_int;

struct SuiteContext {
    uint32_t enum_limit_bits;
    std::vector<VerifyCheck> checks;

    void record(const std::string& name, bool ok, const std::string& detail) {
        checks.push_back({name, ok, false, detail});
    }
    void skip(const std::string& name, const std::string& why) {
        checks.push_back({name, false, true, why});
    }
    bool within_limit(const Params& p) const { return p.total_bits() <= enum_limit_bits; }
};

std::string instance_tag(const Params& p) {
    std::ostringstream os;
    os << "n=" << p.n() << ",k=" << p.k() << ",m=" << p.m();
    return os.str();
}

RandomString random_string_for(const Params& p, uint64_t salt) {
    auto rng = make_engine(salt);
    return RandomString(p.n(), p.k(), random_bits(rng, p.total_bits()));
}

void discrepancy_exhaustive(SuiteContext& ctx, const Params& p) {
    const std::string tag = "discrepancy-oracle-agreement[" + instance_tag(p) + "]";
    if (!ctx.within_limit(p)) {
        ctx.skip(tag, "2^{k*n} exceeds the enumeration limit");
        return;
    }
    const uint64_t total = uint64_t(1) << p.total_bits();
    uint64_t mismatches = 0;
    bool invariance_ok = true;
    for (uint64_t t = 0; t < total; ++t) {
        RandomString alpha = string_from_index(t, p);
        if (discrepancy_bruteforce(alpha, 1, p).value != discrepancy_closed_form(alpha).value)
            ++mismatches;
        if (p.m() >= 2 && !discrepancy_i_invariance_check(alpha, p)) invariance_ok = false;
    }
    ctx.record(tag, mismatches == 0, std::to_string(total) + " strings, " +
                                         std::to_string(mismatches) + " mismatches");
    if (p.m() >= 2)
        ctx.record("discrepancy-i-invariance[" + instance_tag(p) + "]", invariance_ok,
                   invariance_ok ? "d constant over i" : "d varies with i");
}

void discrepancy_random(SuiteContext& ctx, const Params& p, uint64_t samples) {
    const std::string tag = "discrepancy-oracle-agreement-random[" + instance_tag(p) + "]";
    if (!p.keys_enumerable(kMaxSpectrumKeys)) {
        ctx.skip(tag, "n^k exceeds the key enumeration limit");
        return;
    }
    uint64_t mismatches = 0;
    for (uint64_t s = 0; s < samples; ++s) {
        RandomString alpha = random_string_for(p, hash_combine(0xd15c, s));
        if (discrepancy_bruteforce(alpha, 1, p).value != discrepancy_closed_form(alpha).value)
            ++mismatches;
    }
    ctx.record(tag, mismatches == 0,
               std::to_string(samples) + " samples, " + std::to_string(mismatches) + " mismatches");
}

void independence_instance(SuiteContext& ctx, const Params& p) {
    const std::string tag = "independence[" + instance_tag(p) + "]";
    if (!ctx.within_limit(p) || p.total_bits() > 16) {
        ctx.skip(tag, "2^{k*n} exceeds the enumeration limit");
        return;
    }
    IndependenceReport rep = independence_check(p);
    ctx.record(tag, rep.joint_product_form_ok && rep.xminusi_z_invariant_ok,
               std::string("product_form=") + (rep.joint_product_form_ok ? "ok" : "FAIL") +
                   " xminusi_invariant=" + (rep.xminusi_z_invariant_ok ? "ok" : "FAIL"));
}

void goodness_instance(SuiteContext& ctx, const Params& p, uint64_t vectors) {
    const std::string tag = "goodness-identity[" + instance_tag(p) + "]";
    if (!p.keys_enumerable(kMaxSpectrumKeys)) {
        ctx.skip(tag, "n^k exceeds the key enumeration limit");
        return;
    }
    const uint64_t K = p.key_count();
    uint64_t failures = 0;
    for (uint64_t v = 0; v < vectors; ++v) {
        auto rng = make_engine(hash_combine(0x600d, v));
        RandomString alpha = random_string_for(p, hash_combine(0xa1fa, v));
        BitVec guesses = random_bits(rng, K);
        SpectrumVector nu = spectrum(alpha, 1, p);
        GoodnessRecord rec = goodness(guesses, nu, p);
        // Independent count over keys of matches between the guess vector and
        // the actual keystream bit.
        uint64_t matches = 0;
        for (uint64_t zt = 0; zt < K; ++zt) {
            SecretKey z = key_from_index(zt, p);
            bool x = keystream_bit(alpha, derive_subkey(z, 1, p));
            if (guesses.get(zt) == x) ++matches;
        }
        if (Rational(matches, K) != rec.success_probability) ++failures;
    }
    ctx.record(tag, failures == 0,
               std::to_string(vectors) + " vectors, " + std::to_string(failures) + " failures");
}

void preimage_instance(SuiteContext& ctx, const Params& p) {
    const std::string tag = "preimage-inequality[" + instance_tag(p) + "]";
    if (!ctx.within_limit(p)) {
        ctx.skip(tag, "2^{k*n} exceeds the enumeration limit");
        return;
    }
    std::vector<Recorder> recorders;
    recorders.push_back(make_zero_recorder());
    recorders.push_back(make_prefix_recorder(p.beta()));
    recorders.push_back(make_parity_recorder(p.beta(), p.total_bits()));
    for (uint64_t s = 0; s < 5; ++s)
        recorders.push_back(make_hash_recorder(p.beta(), hash_combine(0xbeef, s)));

    bool all_ok = true;
    std::string detail;
    for (const auto& rec : recorders) {
        PreimageCensus census = preimage_census(rec, p);
        bool ok = census.inequality_holds;
        if (rec.name == "prefix") {
            const uint64_t expected = uint64_t(1) << (p.total_bits() - p.beta());
            for (const auto& [eta, size] : census.histogram)
                if (size != expected) ok = false;
        }
        if (!ok) all_ok = false;
        detail += rec.name + "=" + (ok ? "ok " : "FAIL ");
    }
    ctx.record(tag, all_ok, detail);
}

void grammian_instance(SuiteContext& ctx, const Params& p) {
    const std::string tag = "grammian-identities[" + instance_tag(p) + "]";
    if (!ctx.within_limit(p)) {
        ctx.skip(tag, "2^{k*n} exceeds the enumeration limit");
        return;
    }
    const uint64_t total = uint64_t(1) << p.total_bits();
    const uint64_t K = p.key_count();

    std::vector<SpectrumVector> spectra;
    spectra.reserve(total);
    for (uint64_t t = 0; t < total; ++t)
        spectra.push_back(spectrum(string_from_index(t, p), 1, p));

    BigInt d_count = enumerate_D(p).size_of_D;
    bool ok = true;
    for (uint64_t a = 0; a < total && ok; ++a) {
        uint64_t over = 0;
        for (uint64_t b = 0; b < total; ++b) {
            int64_t dot = 0;
            for (uint64_t t = 0; t < K; ++t)
                dot += int64_t(spectra[a].entries[t]) * spectra[b].entries[t];
            if (a == b && dot != int64_t(K)) ok = false;
            BigInt abs_dot(dot < 0 ? -dot : dot);
            RandomString xs = string_from_index(a ^ b, p);
            if (abs_dot != discrepancy_bruteforce(xs, 1, p).value) ok = false;
            if (discrepancy_over_threshold(abs_dot, p)) ++over;
        }
        if (BigInt(over) != d_count) ok = false;
    }
    ctx.record(tag, ok, ok ? "delta_jj=K, |delta|=d(xor), row over-threshold count = |D|"
                           : "identity violated");
}

} // namespace

VerifyReport run_verify_suite(const std::string& suite, const std::optional<Params>& instance,
                              uint32_t enum_limit_bits) {
    SuiteContext ctx{std::min(enum_limit_bits, kMaxExactStringBits), {}};

    bool want_all = suite == "all";
    bool known = want_all;

    if (want_all || suite == "discrepancy") {
        known = true;
        if (instance) {
            if (instance->strings_enumerable(ctx.enum_limit_bits))
                discrepancy_exhaustive(ctx, *instance);
            else
                discrepancy_random(ctx, *instance, 200);
        } else {
            for (auto [n, k] : std::initializer_list<std::pair<uint64_t, uint32_t>>{
                     {2, 2}, {3, 2}, {2, 3}, {4, 2}})
                discrepancy_exhaustive(ctx, Params::create(n, k, n));
            discrepancy_random(ctx, Params::create(16, 3, 16), 200);
        }
    }
    if (want_all || suite == "independence") {
        known = true;
        if (instance) {
            independence_instance(ctx, *instance);
        } else {
            independence_instance(ctx, Params::create(2, 1, 2));
            independence_instance(ctx, Params::create(4, 2, 2));
            independence_instance(ctx, Params::create(4, 2, 4));
        }
    }
    if (want_all || suite == "goodness") {
        known = true;
        if (instance) {
            goodness_instance(ctx, *instance, 100);
        } else {
            goodness_instance(ctx, Params::create(2, 2, 2), 100);
            goodness_instance(ctx, Params::create(3, 2, 3), 100);
        }
    }
    if (want_all || suite == "preimage") {
        known = true;
        if (instance) {
            preimage_instance(ctx, *instance);
        } else {
            preimage_instance(ctx, Params::create(4, 2, 4));
            preimage_instance(ctx, Params::create(8, 2, 8));
        }
    }
    if (want_all || suite == "grammian") {
        known = true;
        if (instance) {
            grammian_instance(ctx, *instance);
        } else {
            grammian_instance(ctx, Params::create(2, 2, 2));
            grammian_instance(ctx, Params::create(3, 2, 3));
        }
    }
    if (!known) fail(errc::unknown_selector, "unknown verify suite: " + suite);

    VerifyReport report;
    report.suite = suite;
    report.checks = std::move(ctx.checks);
    bool any_ran = false;
    bool all_ok = true;
    for (const auto& c : report.checks) {
        if (c.skipped) continue;
        any_ran = true;
        if (!c.passed) all_ok = false;
    }
    report.passed = any_ran && all_ok;
    return report;
}

std::string VerifyReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["passed"] = passed;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name},
                       {"passed", c.passed},
                       {"skipped", c.skipped},
                       {"detail", c.detail}});
    }
    j["checks"] = arr;
    return j.dump();
}

} // namespace bsm
