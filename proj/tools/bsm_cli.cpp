// bsm - command-line front end for the bounded-storage-model toolkit.
//
// Subcommands: keygen, gen-randomness, encrypt, decrypt, attack-sim, verify,
// bounds. Exit codes: 0 success/pass, 1 check failure, 2 usage/format error.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsm/bsm.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CliError {
    int exit_code;
    std::string message;
};

[[noreturn]] void die(int code, const std::string& msg) { throw CliError{code, msg}; }

void check(bsm_status st, const std::string& context) {
    if (st == BSM_OK) return;
    die(kExitUsage,
        context + ": " + bsm_status_name(st) + " (" + bsm_last_error() + ")");
}

std::vector<uint8_t> seed_bytes_from_flag(const std::string& seed) {
    // The library stretches arbitrary strings itself; mirror that here so the
    // CLI accepts both raw hex seeds and free-form labels.
    std::vector<uint8_t> out(32, 0);
    auto hex_val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    bool hex64 = seed.size() == 64;
    if (hex64)
        for (char c : seed)
            if (hex_val(c) < 0) { hex64 = false; break; }
    if (hex64) {
        for (size_t i = 0; i < 32; ++i)
            out[i] = uint8_t(hex_val(seed[2 * i]) * 16 + hex_val(seed[2 * i + 1]));
        return out;
    }
    // FNV/splitmix stretch, identical to the library's seed_from_string.
    auto mix = [](uint64_t& state) {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    auto combine = [&mix](uint64_t a, uint64_t b) {
        uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6));
        return mix(s);
    };
    uint64_t state = 0x5b0e423a2c1fd1a7ull;
    for (char c : seed) state = combine(state, uint64_t(uint8_t(c)));
    for (size_t w = 0; w < 4; ++w) {
        uint64_t v = mix(state);
        for (size_t b = 0; b < 8; ++b) out[8 * w + b] = uint8_t(v >> (8 * b));
    }
    return out;
}

void parse_gamma(const std::string& text, uint64_t& num, uint64_t& den) {
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            num = std::stoull(text.substr(0, slash));
            den = std::stoull(text.substr(slash + 1));
            return;
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) {
            num = std::stoull(text);
            den = 1;
            return;
        }
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        size_t frac_digits = text.size() - dot - 1;
        num = std::stoull(digits);
        den = 1;
        for (size_t i = 0; i < frac_digits; ++i) den *= 10;
    } catch (const std::exception&) {
        die(kExitUsage, "cannot parse gamma: " + text);
    }
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die(kExitUsage, "cannot open for reading: " + path);
    return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const uint8_t* data, size_t len) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) die(kExitUsage, "cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(data), std::streamsize(len));
    if (!out) die(kExitUsage, "write failed: " + path);
}

void emit_json(const std::string& json, const std::string& json_out_path) {
    std::cout << json << "\n";
    if (!json_out_path.empty())
        write_file(json_out_path, reinterpret_cast<const uint8_t*>(json.data()), json.size());
}

struct StringHandle {
    bsm_string* ptr = nullptr;
    ~StringHandle() { bsm_string_destroy(ptr); }
};
struct KeyHandle {
    bsm_key* ptr = nullptr;
    ~KeyHandle() { bsm_key_destroy(ptr); }
};
struct ParamsHandle {
    bsm_params* ptr = nullptr;
    ~ParamsHandle() { bsm_params_destroy(ptr); }
};
struct Buffer {
    char* ptr = nullptr;
    ~Buffer() { bsm_buffer_free(ptr); }
};

int run_xor_command(bool decrypting, const std::string& alpha_path, const std::string& key_path,
                    const std::string& in_path, const std::string& out_path, uint64_t bits_flag) {
    StringHandle alpha;
    check(bsm_string_load(alpha_path.c_str(), &alpha.ptr), "loading the random string");
    KeyHandle key;
    check(bsm_key_load(key_path.c_str(), &key.ptr), "loading the key");

    std::vector<uint8_t> input = read_file(in_path);
    uint64_t nbits = bits_flag != 0 ? bits_flag : uint64_t(input.size()) * 8;
    if (nbits == 0) die(kExitUsage, "input message is empty");
    if ((nbits + 7) / 8 > input.size())
        die(kExitUsage, "--bits exceeds the input length");

    if (bsm_string_ones_count(alpha.ptr) == 0)
        std::cerr << "warning: degenerate randomness (all-zero string); "
                     "ciphertext equals plaintext\n";

    std::vector<uint8_t> output((nbits + 7) / 8, 0);
    bsm_status st = decrypting
                        ? bsm_decrypt(alpha.ptr, key.ptr, input.data(), nbits, output.data())
                        : bsm_encrypt(alpha.ptr, key.ptr, input.data(), nbits, output.data());
    check(st, decrypting ? "decrypt" : "encrypt");
    write_file(out_path, output.data(), output.size());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounded-storage-model encryption toolkit"};
    app.require_subcommand(1);

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate a secret key file");
    uint64_t kg_n = 0;
    uint32_t kg_k = 0;
    std::string kg_seed, kg_out;
    keygen->add_option("--n", kg_n, "row length in bits")->required();
    keygen->add_option("--k", kg_k, "number of rows (security parameter)")->required();
    keygen->add_option("--seed", kg_seed, "seed string (64 hex chars used verbatim)")->required();
    keygen->add_option("--out", kg_out, "output key file")->required();

    // gen-randomness
    auto* genrand = app.add_subcommand("gen-randomness", "generate the public random string");
    uint64_t gr_n = 0;
    uint32_t gr_k = 0;
    std::string gr_seed, gr_out, gr_kind = "deterministic";
    genrand->add_option("--n", gr_n, "row length in bits")->required();
    genrand->add_option("--k", gr_k, "number of rows")->required();
    genrand->add_option("--seed", gr_seed, "seed string")->required();
    genrand->add_option("--generator", gr_kind, "deterministic|crypto (default deterministic)");
    genrand->add_option("--out", gr_out, "output string file")->required();

    // encrypt / decrypt
    std::string enc_alpha, enc_key, enc_in, enc_out;
    uint64_t enc_bits = 0;
    auto* enc = app.add_subcommand("encrypt", "encrypt a message with the derived final key");
    enc->add_option("--alpha", enc_alpha, "random string file")->required();
    enc->add_option("--key", enc_key, "secret key file")->required();
    enc->add_option("--in", enc_in, "plaintext file (raw bytes)")->required();
    enc->add_option("--out", enc_out, "ciphertext file")->required();
    enc->add_option("--bits", enc_bits, "message length in bits (default 8 * byte count)");

    std::string dec_alpha, dec_key, dec_in, dec_out;
    uint64_t dec_bits = 0;
    auto* dec = app.add_subcommand("decrypt", "decrypt a ciphertext");
    dec->add_option("--alpha", dec_alpha, "random string file")->required();
    dec->add_option("--key", dec_key, "secret key file")->required();
    dec->add_option("--in", dec_in, "ciphertext file (raw bytes)")->required();
    dec->add_option("--out", dec_out, "plaintext file")->required();
    dec->add_option("--bits", dec_bits, "message length in bits (default 8 * byte count)");

    // attack-sim
    auto* sim = app.add_subcommand("attack-sim", "run a two-phase adversary game");
    std::string as_game = "bit", as_recorder = "zero", as_phase2 = "random";
    uint64_t as_n = 0, as_m = 1, as_i = 1, as_trials = 1000;
    uint32_t as_k = 0;
    std::string as_gamma = "45/100", as_seed, as_m0, as_m1, as_json_out, as_exact = "auto";
    int64_t as_override = -1;
    sim->add_option("--game", as_game, "bit|semantic (default bit)");
    sim->add_option("--recorder", as_recorder, "zero|prefix|parity|hash");
    sim->add_option("--decoder", as_phase2, "bit: random|constant0|constant1|recompute|bayes");
    sim->add_option("--distinguisher", as_phase2,
                    "semantic: random|constant0|constant1|recompute");
    sim->add_option("--n", as_n, "row length in bits")->required();
    sim->add_option("--k", as_k, "number of rows")->required();
    sim->add_option("--m", as_m, "message length in bits (default 1)");
    sim->add_option("--gamma", as_gamma, "storage fraction, e.g. 45/100 or 0.45");
    sim->add_option("--i", as_i, "withheld bit index for the bit game (default 1)");
    sim->add_option("--trials", as_trials, "Monte-Carlo trials (default 1000)");
    sim->add_option("--seed", as_seed, "seed string")->required();
    sim->add_option("--m0", as_m0, "message 0 as a 0/1 string (semantic game)");
    sim->add_option("--m1", as_m1, "message 1 as a 0/1 string (semantic game)");
    sim->add_option("--exact", as_exact, "auto|never|require (default auto)");
    sim->add_option("--unsafe-test-override-budget", as_override,
                    "bypass beta with this Phase-I budget; sanity tests only");
    sim->add_option("--json-out", as_json_out, "also write the JSON report here");

    // verify
    auto* verify = app.add_subcommand("verify", "run an exact-verification suite");
    std::string vf_suite = "all", vf_json_out;
    uint64_t vf_n = 0, vf_m = 0;
    uint32_t vf_k = 0, vf_enum_limit = 20;
    verify->add_option("--suite", vf_suite,
                       "discrepancy|independence|goodness|preimage|grammian|all");
    verify->add_option("--n", vf_n, "override: row length");
    verify->add_option("--k", vf_k, "override: rows");
    verify->add_option("--m", vf_m, "override: message length (default n)");
    verify->add_option("--enum-limit", vf_enum_limit,
                       "max k*n for 2^{k*n} enumerations (default 20)");
    verify->add_option("--json-out", vf_json_out, "also write the JSON report here");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "closed-form security bounds in log2 space");
    uint64_t bd_n = 0, bd_m = 0;
    uint32_t bd_k = 0;
    std::string bd_gamma = "45/100", bd_json_out;
    bounds->add_option("--n", bd_n, "row length in bits")->required();
    bounds->add_option("--k", bd_k, "number of rows")->required();
    bounds->add_option("--m", bd_m, "message length in bits")->required();
    bounds->add_option("--gamma", bd_gamma, "storage fraction");
    bounds->add_option("--json-out", bd_json_out, "also write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*keygen) {
            auto seed = seed_bytes_from_flag(kg_seed);
            KeyHandle key;
            check(bsm_key_generate(kg_n, kg_k, seed.data(), &key.ptr), "keygen");
            check(bsm_key_save(key.ptr, kg_out.c_str()), "saving the key");
            return kExitOk;
        }
        if (*genrand) {
            int kind;
            if (gr_kind == "deterministic")
                kind = 0;
            else if (gr_kind == "crypto")
                kind = 1;
            else
                die(kExitUsage, "unknown generator kind: " + gr_kind);
            auto seed = seed_bytes_from_flag(gr_seed);
            StringHandle s;
            check(bsm_string_generate(gr_n, gr_k, seed.data(), kind, &s.ptr), "gen-randomness");
            check(bsm_string_save(s.ptr, gr_out.c_str()), "saving the string");
            return kExitOk;
        }
        if (*enc) return run_xor_command(false, enc_alpha, enc_key, enc_in, enc_out, enc_bits);
        if (*dec) return run_xor_command(true, dec_alpha, dec_key, dec_in, dec_out, dec_bits);

        if (*sim) {
            uint64_t gnum, gden;
            parse_gamma(as_gamma, gnum, gden);
            ParamsHandle params;
            check(bsm_params_create(as_n, as_k, as_m, gnum, gden, &params.ptr), "attack-sim");
            int exact_mode;
            if (as_exact == "auto")
                exact_mode = -1;
            else if (as_exact == "never")
                exact_mode = 0;
            else if (as_exact == "require")
                exact_mode = 1;
            else
                die(kExitUsage, "unknown --exact mode: " + as_exact);
            if (as_game == "semantic") {
                if (as_m0.empty()) as_m0.assign(as_m, '0');
                if (as_m1.empty()) as_m1.assign(as_m, '1');
            }
            Buffer json;
            check(bsm_attack_sim_json(params.ptr, as_game.c_str(), as_recorder.c_str(),
                                      as_phase2.c_str(), as_i,
                                      as_m0.empty() ? nullptr : as_m0.c_str(),
                                      as_m1.empty() ? nullptr : as_m1.c_str(), as_trials,
                                      as_seed.c_str(), as_override, exact_mode, &json.ptr),
                  "attack-sim");
            emit_json(json.ptr, as_json_out);
            return kExitOk;
        }

        if (*verify) {
            Buffer json;
            int passed = 0;
            check(bsm_verify_json(vf_suite.c_str(), vf_n, vf_k, vf_m, vf_enum_limit, &json.ptr,
                                  &passed),
                  "verify");
            emit_json(json.ptr, vf_json_out);
            return passed ? kExitOk : kExitCheckFailed;
        }

        if (*bounds) {
            uint64_t gnum, gden;
            parse_gamma(bd_gamma, gnum, gden);
            Buffer json;
            check(bsm_bounds_json(bd_n, bd_k, bd_m, gnum, gden, &json.ptr), "bounds");
            emit_json(json.ptr, bd_json_out);
            return kExitOk;
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.exit_code;
    }
    return kExitUsage;
}
