#include <math.h>
#include <stdio.h>
#include <string.h>

#include "qrecov.h"

int main(void) {
    const double rho[4] = {0.7, 0.0, 0.0, 0.3};
    const double sig[4] = {0.4, 0.0, 0.0, 0.6};
    QrecovState *r = NULL, *s = NULL;
    if (qrecov_state_new(2, rho, NULL, &r) != QRECOV_STATUS_OK) return 1;
    if (qrecov_state_new(2, sig, NULL, &s) != QRECOV_STATUS_OK) return 2;
    double d = 0.0;
    if (qrecov_divergence(r, s, QRECOV_DIVERGENCE_UMEGAKI, NAN, &d) != QRECOV_STATUS_OK) return 3;
    double want = 0.7 * log(0.7 / 0.4) + 0.3 * log(0.3 / 0.6);
    if (fabs(d - want) > 1e-12) return 4;
    if (qrecov_divergence(NULL, s, QRECOV_DIVERGENCE_UMEGAKI, NAN, &d) != QRECOV_STATUS_NULL_POINTER) return 5;
    if (qrecov_last_error() == NULL) return 6;

    QrecovState *a = NULL, *b = NULL;
    QrecovInstance *inst = NULL;
    qrecov_state_random(4, 1, &a);
    qrecov_state_random(4, 2, &b);
    if (qrecov_instance_new_tensor(a, b, 2, 2, 1, &inst) != QRECOV_STATUS_OK) return 7;
    char *json = NULL;
    int passed = 0;
    if (qrecov_certificate_json(inst, "RE_FWD", 0.5, NAN, NAN, NAN, -1.0, &json, &passed) != QRECOV_STATUS_OK) return 8;
    if (!passed || strstr(json, "\"RE_FWD\"") == NULL) return 9;
    printf("%s\n", json);
    qrecov_string_free(json);
    qrecov_instance_free(inst);
    qrecov_state_free(a);
    qrecov_state_free(b);
    qrecov_state_free(r);
    qrecov_state_free(s);
    return 0;
}
