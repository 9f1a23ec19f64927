/* Compiled as C99 to keep the public header C-clean. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "bsm/bsm.h"

int main(void) {
    bsm_params* p = NULL;
    if (bsm_params_create(8, 2, 4, 0, 0, &p) != BSM_OK) {
        fprintf(stderr, "params: %s\n", bsm_last_error());
        return 1;
    }
    if (bsm_params_beta(p) != 7) { /* floor(0.45 * 16) */
        fprintf(stderr, "unexpected beta\n");
        return 1;
    }

    uint8_t seed[32];
    memset(seed, 0x11, sizeof(seed));
    bsm_string* s = NULL;
    bsm_key* z = NULL;
    if (bsm_string_generate(8, 2, seed, 0, &s) != BSM_OK) return 1;
    if (bsm_key_generate(8, 2, seed, &z) != BSM_OK) return 1;

    uint8_t msg = 0x5a, ct = 0, pt = 0;
    if (bsm_encrypt(s, z, &msg, 8, &ct) != BSM_OK) return 1;
    if (bsm_decrypt(s, z, &ct, 8, &pt) != BSM_OK) return 1;
    if (pt != msg) {
        fprintf(stderr, "round trip failed\n");
        return 1;
    }

    char* json = NULL;
    if (bsm_bounds_json(1024, 60, 16, 0, 0, &json) != BSM_OK) return 1;
    if (strstr(json, "theorem1_bound_log2") == NULL) return 1;
    bsm_buffer_free(json);

    bsm_key_destroy(z);
    bsm_string_destroy(s);
    bsm_params_destroy(p);
    printf("capi smoke ok\n");
    return 0;
}
