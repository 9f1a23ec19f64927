#include "bsm/bsm.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include <json.hpp>

#include "bsm/adversary.hpp"
#include "bsm/analysis.hpp"
#include "bsm/error.hpp"
#include "bsm/protocol.hpp"
#include "bsm/randomness.hpp"
#include "bsm/verify.hpp"

struct bsm_params_s {
    bsm::Params p;
};
struct bsm_string_s {
    bsm::RandomString s;
};
struct bsm_key_s {
    uint64_t n;
    bsm::SecretKey z;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

bsm_status map_code(bsm::errc c) {
    switch (c) {
        case bsm::errc::ok: return BSM_OK;
        case bsm::errc::invalid_argument: return BSM_E_INVALID_ARGUMENT;
        case bsm::errc::index_out_of_range: return BSM_E_INDEX_OUT_OF_RANGE;
        case bsm::errc::dimension_mismatch: return BSM_E_DIMENSION_MISMATCH;
        case bsm::errc::length_mismatch: return BSM_E_LENGTH_MISMATCH;
        case bsm::errc::stream_truncated: return BSM_E_STREAM_TRUNCATED;
        case bsm::errc::storage_exceeded: return BSM_E_STORAGE_EXCEEDED;
        case bsm::errc::too_large_to_enumerate: return BSM_E_TOO_LARGE_TO_ENUMERATE;
        case bsm::errc::format_error: return BSM_E_FORMAT;
        case bsm::errc::io_error: return BSM_E_IO;
        case bsm::errc::unknown_selector: return BSM_E_UNKNOWN_SELECTOR;
        case bsm::errc::identical_messages: return BSM_E_IDENTICAL_MESSAGES;
        case bsm::errc::empty_preimage: return BSM_E_EMPTY_PREIMAGE;
    }
    return BSM_E_INTERNAL;
}

template <typename F>
bsm_status guarded(F&& fn) {
    try {
        fn();
        return BSM_OK;
    } catch (const bsm::Error& e) {
        set_error(e.what());
        return map_code(e.code());
    } catch (const std::exception& e) {
        set_error(e.what());
        return BSM_E_INTERNAL;
    } catch (...) {
        set_error("unknown failure");
        return BSM_E_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return buf;
}

bsm::Seed32 seed_from_bytes(const uint8_t seed[32]) {
    bsm::Seed32 s{};
    if (seed) std::memcpy(s.data(), seed, 32);
    return s;
}

constexpr char kKeyMagic[4] = {'B', 'S', 'M', 'K'};
constexpr uint16_t kKeyVersion = 1;

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

void pack_bits(const bsm::BitVec& bits, uint8_t* out) {
    auto bytes = bits.to_bytes();
    std::memcpy(out, bytes.data(), bytes.size());
}

} // namespace

extern "C" {

const char* bsm_version(void) { return "1.0.0"; }

const char* bsm_status_name(bsm_status s) {
    switch (s) {
        case BSM_OK: return "ok";
        case BSM_E_INVALID_ARGUMENT: return "invalid_argument";
        case BSM_E_INDEX_OUT_OF_RANGE: return "index_out_of_range";
        case BSM_E_DIMENSION_MISMATCH: return "dimension_mismatch";
        case BSM_E_LENGTH_MISMATCH: return "length_mismatch";
        case BSM_E_STREAM_TRUNCATED: return "stream_truncated";
        case BSM_E_STORAGE_EXCEEDED: return "storage_exceeded";
        case BSM_E_TOO_LARGE_TO_ENUMERATE: return "too_large_to_enumerate";
        case BSM_E_FORMAT: return "format_error";
        case BSM_E_IO: return "io_error";
        case BSM_E_UNKNOWN_SELECTOR: return "unknown_selector";
        case BSM_E_IDENTICAL_MESSAGES: return "identical_messages";
        case BSM_E_EMPTY_PREIMAGE: return "empty_preimage";
        case BSM_E_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* bsm_last_error(void) { return g_last_error.c_str(); }

void bsm_buffer_free(char* buf) { delete[] buf; }

bsm_status bsm_params_create(uint64_t n, uint32_t k, uint64_t m, uint64_t gamma_num,
                             uint64_t gamma_den, bsm_params** out) {
    if (!out) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        if (gamma_num == 0 || gamma_den == 0) {
            gamma_num = 45;
            gamma_den = 100;
        }
        *out = new bsm_params_s{bsm::Params::create(n, k, m, gamma_num, gamma_den)};
    });
}

void bsm_params_destroy(bsm_params* p) { delete p; }
uint64_t bsm_params_n(const bsm_params* p) { return p ? p->p.n() : 0; }
uint32_t bsm_params_k(const bsm_params* p) { return p ? p->p.k() : 0; }
uint64_t bsm_params_m(const bsm_params* p) { return p ? p->p.m() : 0; }
uint64_t bsm_params_beta(const bsm_params* p) { return p ? p->p.beta() : 0; }

bsm_status bsm_string_generate(uint64_t n, uint32_t k, const uint8_t seed[32], int kind,
                               bsm_string** out) {
    if (!out || !seed) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        if (kind != 0 && kind != 1) bsm::fail(bsm::errc::invalid_argument, "kind must be 0 or 1");
        if (n == 0 || k == 0) bsm::fail(bsm::errc::invalid_argument, "n and k must be positive");
        if (k != 0 && n > UINT64_MAX / k)
            bsm::fail(bsm::errc::invalid_argument, "k*n overflows");
        bsm::StreamConfig cfg;
        cfg.seed = seed_from_bytes(seed);
        cfg.generator_kind =
            kind == 1 ? bsm::GeneratorKind::cryptographic : bsm::GeneratorKind::deterministic_test;
        *out = new bsm_string_s{bsm::generate(cfg, n, k)};
    });
}

bsm_status bsm_string_save(const bsm_string* s, const char* path) {
    if (!s || !path) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] { bsm::save(s->s, path); });
}

bsm_status bsm_string_load(const char* path, bsm_string** out) {
    if (!out || !path) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] { *out = new bsm_string_s{bsm::load(path)}; });
}

void bsm_string_destroy(bsm_string* s) { delete s; }
uint64_t bsm_string_n(const bsm_string* s) { return s ? s->s.n() : 0; }
uint32_t bsm_string_k(const bsm_string* s) { return s ? s->s.k() : 0; }

int bsm_string_bit(const bsm_string* s, uint32_t row, uint64_t col) {
    if (!s || row >= s->s.k() || col >= s->s.n()) return -1;
    return s->s.bit(row, col) ? 1 : 0;
}

uint64_t bsm_string_ones_count(const bsm_string* s) {
    return s ? s->s.bits().count_ones() : 0;
}

bsm_status bsm_string_stats_json(const bsm_string* s, char** json_out) {
    if (!s || !json_out) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        bsm::RowStats stats = bsm::row_stats(s->s);
        nlohmann::json j;
        j["ones_count"] = stats.ones_count;
        j["global_ones_fraction"] = bsm::rational_to_string(stats.global_ones_fraction);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : stats.per_row_ones_fraction)
            rows.push_back(bsm::rational_to_string(r));
        j["per_row_ones_fraction"] = rows;
        *json_out = dup_string(j.dump());
    });
}

bsm_status bsm_key_generate(uint64_t n, uint32_t k, const uint8_t seed[32], bsm_key** out) {
    if (!out || !seed) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        if (n == 0 || k == 0) bsm::fail(bsm::errc::invalid_argument, "n and k must be positive");
        bsm::Seed32 s = seed_from_bytes(seed);
        auto rng = bsm::make_engine(bsm::substream_seed(s, 0x6b6579 /* "key" */));
        bsm::SecretKey z;
        z.z.resize(k);
        for (uint32_t j = 0; j < k; ++j) z.z[j] = bsm::uniform_below(rng, n);
        *out = new bsm_key_s{n, std::move(z)};
    });
}

bsm_status bsm_key_save(const bsm_key* z, const char* path) {
    if (!z || !path) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) bsm::fail(bsm::errc::io_error, std::string("cannot open for writing: ") + path);
        out.write(kKeyMagic, 4);
        write_le(out, kKeyVersion, 2);
        write_le(out, z->n, 8);
        write_le(out, z->z.z.size(), 4);
        for (uint64_t c : z->z.z) write_le(out, c, 8);
        if (!out) bsm::fail(bsm::errc::io_error, std::string("write failed: ") + path);
    });
}

bsm_status bsm_key_load(const char* path, bsm_key** out) {
    if (!out || !path) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) bsm::fail(bsm::errc::io_error, std::string("cannot open for reading: ") + path);
        std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
        if (data.size() < 18) bsm::fail(bsm::errc::format_error, "file too short for a BSMK header");
        if (std::memcmp(data.data(), kKeyMagic, 4) != 0)
            bsm::fail(bsm::errc::format_error, "bad magic, expected BSMK");
        if (read_le(data.data() + 4, 2) != kKeyVersion)
            bsm::fail(bsm::errc::format_error, "unsupported BSMK version");
        uint64_t n = read_le(data.data() + 6, 8);
        uint64_t k = read_le(data.data() + 14, 4);
        if (n == 0 || k == 0) bsm::fail(bsm::errc::format_error, "BSMK header has zero dimensions");
        if (data.size() != 18 + 8 * k) bsm::fail(bsm::errc::format_error, "BSMK length mismatch");
        bsm::SecretKey z;
        z.z.resize(k);
        for (uint64_t j = 0; j < k; ++j) {
            z.z[j] = read_le(data.data() + 18 + 8 * j, 8);
            if (z.z[j] >= n) bsm::fail(bsm::errc::format_error, "key component out of Z_n");
        }
        *out = new bsm_key_s{n, std::move(z)};
    });
}

void bsm_key_destroy(bsm_key* z) { delete z; }
uint64_t bsm_key_n(const bsm_key* z) { return z ? z->n : 0; }
uint32_t bsm_key_k(const bsm_key* z) { return z ? uint32_t(z->z.z.size()) : 0; }

uint64_t bsm_key_component(const bsm_key* z, uint32_t j) {
    if (!z || j >= z->z.z.size()) return UINT64_MAX;
    return z->z.z[j];
}

namespace {

bsm::Params protocol_params(const bsm_string* s, const bsm_key* z, uint64_t m) {
    if (z->n != s->s.n() || z->z.z.size() != s->s.k())
        bsm::fail(bsm::errc::dimension_mismatch, "key and string dimensions differ");
    if (m == 0) bsm::fail(bsm::errc::length_mismatch, "message must have at least one bit");
    if (m > s->s.n())
        bsm::fail(bsm::errc::length_mismatch, "message length exceeds n bits");
    return bsm::Params::create(s->s.n(), s->s.k(), m);
}

} // namespace

bsm_status bsm_expand_key(const bsm_string* s, const bsm_key* z, uint64_t m, uint8_t* key_out) {
    if (!s || !z || !key_out) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        bsm::Params p = protocol_params(s, z, m);
        pack_bits(bsm::expand_key(s->s, z->z, p), key_out);
    });
}

bsm_status bsm_encrypt(const bsm_string* s, const bsm_key* z, const uint8_t* in, uint64_t nbits,
                       uint8_t* out) {
    if (!s || !z || !in || !out) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        bsm::Params p = protocol_params(s, z, nbits);
        bsm::Message msg = bsm::BitVec::from_bytes(in, size_t((nbits + 7) / 8), nbits);
        pack_bits(bsm::encrypt(msg, bsm::expand_key(s->s, z->z, p)), out);
    });
}

bsm_status bsm_decrypt(const bsm_string* s, const bsm_key* z, const uint8_t* in, uint64_t nbits,
                       uint8_t* out) {
    return bsm_encrypt(s, z, in, nbits, out);
}

bsm_status bsm_attack_sim_json(const bsm_params* p, const char* game, const char* recorder,
                               const char* phase2, uint64_t bit_index, const char* m0_bits,
                               const char* m1_bits, uint64_t trials, const char* seed,
                               int64_t unsafe_budget_override, int compute_exact,
                               char** json_out) {
    if (!p || !game || !recorder || !phase2 || !seed || !json_out) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        const bsm::Params& params = p->p;
        bsm::Seed32 seed_bytes = bsm::seed_from_string(seed);
        uint64_t salt = bsm::substream_seed(seed_bytes, 0x5a17);

        bsm::GameOptions opts;
        if (unsafe_budget_override >= 0)
            opts.unsafe_test_override_budget = uint64_t(unsafe_budget_override);
        opts.compute_exact_if_feasible = compute_exact != 0;
        uint64_t budget = opts.unsafe_test_override_budget.value_or(params.beta());

        bsm::Recorder rec = bsm::recorder_by_name(recorder, params, budget, salt);

        bsm::GameResult result;
        std::string game_name = game;
        if (game_name == "bit") {
            bsm::BitDecoder dec =
                bsm::decoder_by_name(phase2, rec, params, bsm::hash_combine(salt, 2), opts);
            result = bsm::bit_security_game(rec, dec, params, bit_index, trials, seed_bytes, opts);
            if (compute_exact == 1 && !result.exact)
                result.exact = bsm::exact_bit_advantage(rec, dec, params, bit_index, opts);
        } else if (game_name == "semantic") {
            if (!m0_bits || !m1_bits)
                bsm::fail(bsm::errc::invalid_argument, "semantic game needs m0 and m1");
            bsm::Message m0 = bsm::BitVec::from_string(m0_bits);
            bsm::Message m1 = bsm::BitVec::from_string(m1_bits);
            if (m0.size() != params.m() || m1.size() != params.m())
                bsm::fail(bsm::errc::length_mismatch, "messages must have exactly m bits");
            bsm::Distinguisher dist = bsm::distinguisher_by_name(
                phase2, params, m0, m1, bsm::hash_combine(salt, 3));
            result = bsm::semantic_security_game(rec, dist, m0, m1, params, trials, seed_bytes,
                                                 opts);
            if (compute_exact == 1 && !result.exact)
                result.exact =
                    bsm::exact_distinguisher_advantage(rec, dist, m0, m1, params, opts);
        } else {
            bsm::fail(bsm::errc::unknown_selector, std::string("unknown game: ") + game);
        }
        result.seed = seed;
        *json_out = dup_string(result.to_json(params));
    });
}

bsm_status bsm_bounds_json(uint64_t n, uint32_t k, uint64_t m, uint64_t gamma_num,
                           uint64_t gamma_den, char** json_out) {
    if (!json_out) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        if (gamma_num == 0 || gamma_den == 0) {
            gamma_num = 45;
            gamma_den = 100;
        }
        bsm::Params p = bsm::Params::create(n, k, m, gamma_num, gamma_den);
        *json_out = dup_string(bsm::security_bounds(p).to_json(p));
    });
}

bsm_status bsm_verify_json(const char* suite, uint64_t n, uint32_t k, uint64_t m,
                           uint32_t enum_limit_bits, char** json_out, int* passed) {
    if (!suite || !json_out || !passed) return BSM_E_INVALID_ARGUMENT;
    return guarded([&] {
        std::optional<bsm::Params> instance;
        if (n != 0) instance = bsm::Params::create(n, k, m == 0 ? n : m);
        if (enum_limit_bits == 0) enum_limit_bits = 20;
        bsm::VerifyReport report = bsm::run_verify_suite(suite, instance, enum_limit_bits);
        *passed = report.passed ? 1 : 0;
        *json_out = dup_string(report.to_json());
    });
}

} // extern "C"
