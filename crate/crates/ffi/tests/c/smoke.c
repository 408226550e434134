#include <stdio.h>
#include <string.h>

#include "pmds.h"

#define CHECK(cond)                                                     \
    do {                                                                \
        if (!(cond)) {                                                  \
            char msg[256];                                              \
            pmds_last_error_message(msg, sizeof msg);                   \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond, msg); \
            return 1;                                                   \
        }                                                               \
    } while (0)

int main(void) {
    const size_t r[2] = {1, 1};
    PmdsCode *code = NULL;
    CHECK(pmds_code_construct(2, 2, r, 1, "gf(3)", &code) == PMDS_STATUS_OK);

    size_t k = 0, n = 0;
    uint32_t q = 0;
    CHECK(pmds_code_dims(code, &k, &n, &q) == PMDS_STATUS_OK);
    CHECK(k == 3 && n == 6 && q == 3);

    bool ok = false;
    CHECK(pmds_code_verify(code, PMDS_VERIFY_MODE_MR, &ok) == PMDS_STATUS_OK && ok);

    const uint32_t msg[3] = {1, 2, 1};
    uint32_t cw[6];
    CHECK(pmds_code_encode(code, msg, 3, cw, 6) == PMDS_STATUS_OK);

    PmdsDecoder *dec = NULL;
    CHECK(pmds_decoder_new(code, &dec) == PMDS_STATUS_OK);
    const uint8_t erased[6] = {1, 0, 0, 1, 1, 0};
    uint32_t out[6];
    CHECK(pmds_decode(dec, cw, erased, 6, out) == PMDS_STATUS_OK);
    CHECK(memcmp(out, cw, sizeof cw) == 0);

    PmdsCode *small = NULL;
    const size_t r2[2] = {2, 2};
    CHECK(pmds_code_construct(2, 2, r2, 1, "gf(3)", &small) == PMDS_STATUS_FIELD_TOO_SMALL);

    pmds_decoder_free(dec);
    pmds_code_free(code);
    printf("ok %u %u %u %u %u %u\n", out[0], out[1], out[2], out[3], out[4], out[5]);
    return 0;
}
