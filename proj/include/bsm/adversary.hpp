#ifndef BSM_ADVERSARY_HPP
#define BSM_ADVERSARY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "bsm/params.hpp"
#include "bsm/protocol.hpp"
#include "bsm/randomness.hpp"
#include "bsm/rng.hpp"

namespace bsm {

/// Phase-I output: at most beta stored bits (more only under an explicit
/// test-override budget).
using StoredState = BitVec;

/// Phase-I recording function A_1/B_1. behavior must be deterministic and
/// total; its output may not exceed declared_budget bits.
struct Recorder {
    std::function<BitVec(const RandomString&)> behavior;
    uint64_t declared_budget = 0;
    std::string name;
};

/// Phase-II decoder B_2 for the bit-security game: guesses the withheld final
/// key bit X_i from (eta, Z, X^{-i}). Deterministic. The index i is the one
/// fixed by the game.
struct BitDecoder {
    std::function<bool(const StoredState& eta, const SecretKey& z,
                       const BitVec& x_minus_i, uint64_t i)>
        behavior;
    std::string name;
};

/// Phase-II decoder A_2 for the distinguishing game: maps (zeta, Z, C) to a
/// bit. Deterministic.
struct Distinguisher {
    std::function<bool(const StoredState& zeta, const SecretKey& z, const Ciphertext& c)> behavior;
    std::string name;
};

struct GameResult {
    std::string game;
    uint64_t trials = 0;
    uint64_t successes = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    std::optional<Rational> exact;
    double bound = 0.0;
    std::string seed;

    /// JSON per the documented report schema.
    std::string to_json(const Params& p) const;
};

/// Runs Phase I: materializes the broadcast, applies the recorder, and
/// enforces the storage bound. Throws storage_exceeded if the recorder emits
/// more than budget bits.
StoredState run_phase1(const Recorder& rec, BitSource& alpha_stream, const Params& p,
                       uint64_t budget);
StoredState run_phase1(const Recorder& rec, const RandomString& alpha, uint64_t budget);

struct GameOptions {
    /// Storage budget used instead of Params::beta. Only for perfect-information
    /// sanity tests; never use when measuring security.
    std::optional<uint64_t> unsafe_test_override_budget;
    /// Attach the exact enumeration value when the instance is small enough.
    bool compute_exact_if_feasible = true;
};

/// Monte-Carlo bit-security game: per trial, (alpha, Z) are sampled uniformly
/// from independent substreams of (seed, trial counter); success means the
/// decoder reproduces X_i from (eta, Z, X^{-i}). bound is the success-rate
/// ceiling 1/2 + 2^{-k/6} + 2^{-0.002kn+1}.
GameResult bit_security_game(const Recorder& rec, const BitDecoder& dec, const Params& p,
                             uint64_t i, uint64_t trials, const Seed32& seed,
                             const GameOptions& opts = {});

/// Exact success probability of the decoder over all (alpha, Z) pairs, as a
/// rational with denominator 2^(nk) * n^k. Requires nk <= 24 and n^k <= 2^20.
Rational exact_bit_advantage(const Recorder& rec, const BitDecoder& dec, const Params& p,
                             uint64_t i, const GameOptions& opts = {});

/// The optimal Phase-II decoder at desk scale: enumerates every string
/// consistent with (eta, X^{-i}) for the given Z and outputs the majority
/// value of X_i (ties -> 0). Throws empty_preimage when the conditioning
/// event cannot occur under honest play.
BitDecoder bayes_optimal_decoder(const Recorder& rec, const Params& p,
                                 const GameOptions& opts = {});

/// Monte-Carlo distinguishing game with paired sampling: per trial both
/// encryptions use the same (alpha, Z), so estimate = |sum of paired
/// differences| / trials. bound is the advantage ceiling
/// m * (2^{-k/6+1} + 2^{-0.002kn+2}).
GameResult semantic_security_game(const Recorder& rec, const Distinguisher& dist,
                                  const Message& m0, const Message& m1, const Params& p,
                                  uint64_t trials, const Seed32& seed,
                                  const GameOptions& opts = {});

/// Exact distinguishing advantage |Pr(dist=1 | M1) - Pr(dist=1 | M0)| over all
/// (alpha, Z) pairs. Same enumeration limits as exact_bit_advantage.
Rational exact_distinguisher_advantage(const Recorder& rec, const Distinguisher& dist,
                                       const Message& m0, const Message& m1, const Params& p,
                                       const GameOptions& opts = {});

/// Bit predictor built from a distinguisher by the hybrid argument. Position i
/// must be one where the messages differ; guess_bit is the value planted at
/// position i of the crafted ciphertext. For the best choice of (i, guess_bit)
/// the predictor's exact advantage is at least epsilon/(2m).
BitDecoder reduction_bit_predictor(const Distinguisher& dist, const Message& m0,
                                   const Message& m1, uint64_t i, bool guess_bit);

struct ReductionReport {
    Rational epsilon;              // exact advantage of the distinguisher
    Rational best_advantage;       // max over (i, guess_bit) of |success - 1/2|
    uint64_t best_i = 0;
    bool best_guess_bit = false;
    Rational required;             // epsilon / (2m)
    bool inequality_holds = false;
};

/// Exhaustively evaluates the reduction: computes the distinguisher's exact
/// advantage and the exact advantage of every hybrid predictor, and checks
/// best >= epsilon/(2m).
ReductionReport verify_reduction(const Recorder& rec, const Distinguisher& dist,
                                 const Message& m0, const Message& m1, const Params& p,
                                 const GameOptions& opts = {});

// --- named constructions (CLI selectors and test fixtures) ---

/// Stores nothing.
Recorder make_zero_recorder();
/// Stores the first `budget` broadcast bits.
Recorder make_prefix_recorder(uint64_t budget);
/// Parity sketch: output bit s is the XOR of broadcast positions congruent to
/// s mod the output length (min(budget, kn) bits).
Recorder make_parity_recorder(uint64_t budget, uint64_t total_bits);
/// Fixed-length `budget`-bit output derived by hashing the whole string; a
/// deterministic stand-in for an arbitrary recording function.
Recorder make_hash_recorder(uint64_t budget, uint64_t salt);

BitDecoder make_constant_decoder(bool bit);
/// Deterministic hash of (eta, Z, X^{-i}, i): behaves like a random guess.
BitDecoder make_hash_decoder(uint64_t salt);
/// Full-information decoder: interprets eta as the entire string and recomputes
/// X_i. Requires eta of exactly k*n bits.
BitDecoder make_recompute_decoder(const Params& p);

Distinguisher make_constant_distinguisher(bool bit);
Distinguisher make_hash_distinguisher(uint64_t salt);
/// Full-information distinguisher: interprets zeta as the string, recomputes X,
/// and outputs 1 iff C xor X equals m1.
Distinguisher make_recompute_distinguisher(const Params& p, const Message& m1);

/// Selector lookups used by the CLI and C API. Throw unknown_selector.
Recorder recorder_by_name(const std::string& name, const Params& p, uint64_t budget,
                          uint64_t salt);
BitDecoder decoder_by_name(const std::string& name, const Recorder& rec, const Params& p,
                           uint64_t salt, const GameOptions& opts);
Distinguisher distinguisher_by_name(const std::string& name, const Params& p,
                                    const Message& m0, const Message& m1, uint64_t salt);

} // namespace bsm

#endif
