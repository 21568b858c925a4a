#include <stdio.h>
#include "qosc.h"

static double square(double x, void *user) {
    (void)user;
    return x * x;
}

int main(void) {
    double v = 0.0;
    if (qosc_q_number(0.5, 3.0, &v) != QOSC_STATUS_OK) return 1;
    printf("[3]_0.5 = %g\n", v);

    if (qosc_jackson_integral(0.5, square, NULL, 1e-14, &v) != QOSC_STATUS_OK) return 1;
    printf("int x^2 d_q x = %g\n", v);

    QoscSpace *space = NULL;
    QoscOperator *a = NULL;
    if (qosc_space_new(2, 4, &space) != QOSC_STATUS_OK) return 1;
    if (qosc_operator_new(space, 0.5, QOSC_OPERATOR_KIND_ANNIHILATOR, 1, &a) != QOSC_STATUS_OK) return 1;
    printf("dim %zu nnz %zu\n", qosc_operator_dim(a), qosc_operator_nnz(a));
    qosc_operator_free(a);
    qosc_space_free(space);

    char *report = NULL;
    int32_t passed = 0;
    if (qosc_run("relations", "{\"q\": 0.3}", &report, &passed) != QOSC_STATUS_OK) {
        fprintf(stderr, "%s\n", qosc_last_error_message());
        return 1;
    }
    printf("relations passed: %d\n", passed);
    qosc_string_free(report);

    if (qosc_q_number(1.5, 1.0, &v) == QOSC_STATUS_INVALID_ARGUMENT)
        printf("rejected: %s\n", qosc_last_error_message());
    return passed ? 0 : 1;
}
