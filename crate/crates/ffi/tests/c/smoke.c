#include <math.h>
#include <stdio.h>
#include <string.h>

#include "toda.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond);       \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    const double t[] = {0.0, -7.0, 0.0, 1.0};
    TodaCurve *curve = NULL;
    CHECK(toda_curve_new(t, 4, &curve) == TODA_STATUS_OK);
    size_t g = 0, len = 0;
    CHECK(toda_curve_genus(curve, &g) == TODA_STATUS_OK && g == 2);
    double bp[6];
    CHECK(toda_curve_branch_points(curve, bp, 2, &len) == TODA_STATUS_BUFFER_TOO_SMALL && len == 6);
    CHECK(toda_curve_branch_points(curve, bp, 6, &len) == TODA_STATUS_OK);
    CHECK(bp[0] < bp[5]);
    toda_curve_free(curve);

    const double bad[] = {1.0, 2.0};
    CHECK(toda_curve_new(bad, 1, &curve) != TODA_STATUS_OK && curve == NULL);
    CHECK(toda_last_error_message() != NULL);

    TodaSpectrum *spec = NULL;
    CHECK(toda_spectrum_solve(1.0, 2, &spec) == TODA_STATUS_OK);
    double e = 0.0, t2 = 0.0;
    CHECK(toda_spectrum_level(spec, 0, &e, &t2) == TODA_STATUS_OK);
    CHECK(fabs(e - 3.059174596901) < 1e-9 && fabs(t2 + e) < 1e-12);
    CHECK(toda_spectrum_level(spec, 5, &e, &t2) == TODA_STATUS_OUT_OF_RANGE);
    CHECK(strstr(toda_last_error_message(), "level 5") != NULL);
    toda_spectrum_free(spec);

    printf("toda %s ok\n", toda_version());
    return 0;
}
