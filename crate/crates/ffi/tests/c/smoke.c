#include <math.h>
#include <stdio.h>
#include <string.h>

#include "entangle.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    EntState *ghz = NULL;
    CHECK(ent_state_ghz(3, &ghz) == ENT_STATUS_OK);

    double tangle = 0.0;
    CHECK(ent_three_tangle(ghz, &tangle) == ENT_STATUS_OK);
    CHECK(fabs(tangle - 0.25) < 1e-12);

    EntSloccClass cls;
    CHECK(ent_slocc_classify(ghz, &cls) == ENT_STATUS_OK);
    CHECK(cls == ENT_SLOCC_CLASS_GHZ);

    size_t cut[] = {1};
    double coeffs[2];
    size_t len = 0;
    CHECK(ent_schmidt_coefficients(ghz, cut, 1, coeffs, 2, &len) == ENT_STATUS_OK);
    CHECK(len == 2 && fabs(coeffs[0] - 0.5) < 1e-12);

    double c;
    CHECK(ent_concurrence(ghz, &c) == ENT_STATUS_UNSUPPORTED_DIMS);
    CHECK(ent_last_error() != NULL && strstr(ent_last_error(), "two-qubit") != NULL);

    char *json = NULL;
    CHECK(ent_state_to_json(ghz, &json) == ENT_STATUS_OK);
    EntState *back = NULL;
    CHECK(ent_state_from_json(json, &back) == ENT_STATUS_OK);
    ent_string_free(json);

    size_t dim = 0;
    CHECK(ent_state_dim(back, &dim) == ENT_STATUS_OK && dim == 8);

    ent_state_free(back);
    ent_state_free(ghz);
    printf("entangle %s ok\n", ent_version());
    return 0;
}
