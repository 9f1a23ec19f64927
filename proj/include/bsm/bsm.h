/*
 * bsm.h - C interface to the bounded-storage-model encryption toolkit.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns a bsm_status; on failure bsm_last_error()
 * carries a human-readable message for the calling thread. JSON report
 * strings are allocated by the library and must be released with
 * bsm_buffer_free().
 */
#ifndef BSM_H
#define BSM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BSM_API __declspec(dllexport)
#else
#define BSM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bsm_status {
    BSM_OK = 0,
    BSM_E_INVALID_ARGUMENT = 1,
    BSM_E_INDEX_OUT_OF_RANGE = 2,
    BSM_E_DIMENSION_MISMATCH = 3,
    BSM_E_LENGTH_MISMATCH = 4,
    BSM_E_STREAM_TRUNCATED = 5,
    BSM_E_STORAGE_EXCEEDED = 6,
    BSM_E_TOO_LARGE_TO_ENUMERATE = 7,
    BSM_E_FORMAT = 8,
    BSM_E_IO = 9,
    BSM_E_UNKNOWN_SELECTOR = 10,
    BSM_E_IDENTICAL_MESSAGES = 11,
    BSM_E_EMPTY_PREIMAGE = 12,
    BSM_E_INTERNAL = 13
} bsm_status;

typedef struct bsm_params_s bsm_params;
typedef struct bsm_string_s bsm_string; /* the public random string */
typedef struct bsm_key_s bsm_key;       /* the secret key Z */

BSM_API const char* bsm_version(void);
BSM_API const char* bsm_status_name(bsm_status s);
/* Message describing the most recent failure on this thread. */
BSM_API const char* bsm_last_error(void);
BSM_API void bsm_buffer_free(char* buf);

/* --- parameters ------------------------------------------------------- */

/* gamma defaults to 45/100 when gamma_num or gamma_den is 0. */
BSM_API bsm_status bsm_params_create(uint64_t n, uint32_t k, uint64_t m,
                                     uint64_t gamma_num, uint64_t gamma_den,
                                     bsm_params** out);
BSM_API void bsm_params_destroy(bsm_params* p);
BSM_API uint64_t bsm_params_n(const bsm_params* p);
BSM_API uint32_t bsm_params_k(const bsm_params* p);
BSM_API uint64_t bsm_params_m(const bsm_params* p);
BSM_API uint64_t bsm_params_beta(const bsm_params* p);

/* --- public random string --------------------------------------------- */

/* kind: 0 = deterministic test generator, 1 = ChaCha20. Both are pure
 * functions of (seed, n, k). */
BSM_API bsm_status bsm_string_generate(uint64_t n, uint32_t k, const uint8_t seed[32],
                                       int kind, bsm_string** out);
BSM_API bsm_status bsm_string_save(const bsm_string* s, const char* path);
BSM_API bsm_status bsm_string_load(const char* path, bsm_string** out);
BSM_API void bsm_string_destroy(bsm_string* s);
BSM_API uint64_t bsm_string_n(const bsm_string* s);
BSM_API uint32_t bsm_string_k(const bsm_string* s);
/* Returns 0/1, or -1 on range error. */
BSM_API int bsm_string_bit(const bsm_string* s, uint32_t row, uint64_t col);
BSM_API uint64_t bsm_string_ones_count(const bsm_string* s);
/* {"ones_count", "global_ones_fraction", "per_row_ones_fraction"} with exact
 * fractions rendered as "p/q" strings. */
BSM_API bsm_status bsm_string_stats_json(const bsm_string* s, char** json_out);

/* --- secret key -------------------------------------------------------- */

BSM_API bsm_status bsm_key_generate(uint64_t n, uint32_t k, const uint8_t seed[32],
                                    bsm_key** out);
BSM_API bsm_status bsm_key_save(const bsm_key* z, const char* path);
BSM_API bsm_status bsm_key_load(const char* path, bsm_key** out);
BSM_API void bsm_key_destroy(bsm_key* z);
BSM_API uint64_t bsm_key_n(const bsm_key* z);
BSM_API uint32_t bsm_key_k(const bsm_key* z);
/* Component j in [0,k); returns UINT64_MAX on range error. */
BSM_API uint64_t bsm_key_component(const bsm_key* z, uint32_t j);

/* --- protocol ----------------------------------------------------------- */

/* Derives the m-bit final key into key_out (ceil(m/8) bytes, LSB-first). */
BSM_API bsm_status bsm_expand_key(const bsm_string* s, const bsm_key* z, uint64_t m,
                                  uint8_t* key_out);
/* One-shot XOR encryption of nbits packed LSB-first; decryption is identical.
 * in and out may alias. */
BSM_API bsm_status bsm_encrypt(const bsm_string* s, const bsm_key* z, const uint8_t* in,
                               uint64_t nbits, uint8_t* out);
BSM_API bsm_status bsm_decrypt(const bsm_string* s, const bsm_key* z, const uint8_t* in,
                               uint64_t nbits, uint8_t* out);

/* --- games, verification, bounds --------------------------------------- */

/*
 * Runs a two-phase attack game and returns the GameResult report as JSON:
 * {"game","params":{n,k,m,gamma},"trials","successes","estimate",
 *  "std_error","exact","bound","seed"}.
 *
 * game: "bit" or "semantic".
 * recorder: "zero" | "prefix" | "parity" | "hash".
 * phase2: bit game decoders "random" | "constant0" | "constant1" |
 *         "recompute" | "bayes"; semantic game distinguishers "random" |
 *         "constant0" | "constant1" | "recompute".
 * bit_index: 1-based withheld position (bit game).
 * m0_bits/m1_bits: ASCII 0/1 strings of length m (semantic game).
 * unsafe_budget_override: -1 for the protocol budget beta; anything else
 * bypasses the storage bound and is for sanity tests only.
 * compute_exact: 0 never, 1 require, -1 attach when cheap enough.
 */
BSM_API bsm_status bsm_attack_sim_json(const bsm_params* p, const char* game,
                                       const char* recorder, const char* phase2,
                                       uint64_t bit_index, const char* m0_bits,
                                       const char* m1_bits, uint64_t trials,
                                       const char* seed, int64_t unsafe_budget_override,
                                       int compute_exact, char** json_out);

/*
 * Closed-form bound report:
 * {"quantity":"security_bounds","params",...log2 fields...,"vacuous"}.
 */
BSM_API bsm_status bsm_bounds_json(uint64_t n, uint32_t k, uint64_t m, uint64_t gamma_num,
                                   uint64_t gamma_den, char** json_out);

/*
 * Runs an exact-verification suite: "discrepancy" | "independence" |
 * "goodness" | "preimage" | "grammian" | "all". n = 0 selects the suite's
 * built-in instance set; otherwise the single instance (n,k,m) is checked.
 * enum_limit_bits caps 2^{k*n} enumerations; checks above the cap are
 * reported as skipped with an error note. *passed is set to 1 iff every
 * executed check passed and at least one check ran.
 */
BSM_API bsm_status bsm_verify_json(const char* suite, uint64_t n, uint32_t k, uint64_t m,
                                   uint32_t enum_limit_bits, char** json_out, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* BSM_H */
