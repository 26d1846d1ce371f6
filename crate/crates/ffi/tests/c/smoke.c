#include <stdio.h>
#include "geoquant.h"

int main(void) {
    double levels[8];
    size_t len = 0;
    if (gq_oscillator_spectrum(8, 1.0, true, levels, 8, &len) != GQ_STATUS_OK || len != 8) return 1;
    for (size_t j = 0; j < len; ++j) {
        if (levels[j] != (double)j + 0.5) return 2;
    }
    GqManifold *m = NULL;
    if (gq_manifold_sphere(0.5, 1.0, &m) != GQ_STATUS_OK) return 3;
    bool ok = false;
    double ratio = 0.0;
    if (gq_check_pc1(m, &ok, &ratio, 1, &len) != GQ_STATUS_OK || !ok) return 4;
    gq_manifold_free(m);
    if (gq_manifold_sphere(-1.0, 1.0, &m) != GQ_STATUS_INVALID_PARAMETER) return 5;
    printf("%s\n", gq_last_error());
    return 0;
}
