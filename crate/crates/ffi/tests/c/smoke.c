#include <math.h>
#include <stdio.h>
#include <string.h>

#include "revealing.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,   \
                    rv_last_error_message());                        \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    RvLp *lp = NULL;
    RvSolution *sol = NULL;
    RvSolveStatus status;
    RvCertificate cert;
    double value, x[3];

    CHECK(rv_family_build("toy", 3, &lp) == RV_STATUS_OK);
    CHECK(rv_lp_n_vars(lp) == 3);
    CHECK(rv_lp_solve(lp, &sol) == RV_STATUS_OK);
    CHECK(rv_solution_status(sol, &status) == RV_STATUS_OK);
    CHECK(status == RV_SOLVE_STATUS_OPTIMAL);
    CHECK(rv_solution_objective(sol, &value) == RV_STATUS_OK);
    CHECK(fabs(value - 19.0 / 27.0) < 1e-12);
    CHECK(rv_solution_copy_x(sol, x, 3) == RV_STATUS_OK);
    CHECK(rv_solution_copy_x(sol, x, 2) == RV_STATUS_LENGTH_MISMATCH);
    CHECK(rv_certify(lp, sol, 1e-8, &cert) == RV_STATUS_OK && cert.passed);
    rv_solution_free(sol);
    rv_lp_free(lp);

    CHECK(rv_family_build("adwords", 3, &lp) == RV_STATUS_INVALID_INPUT);
    CHECK(strstr(rv_last_error_message(), "adwords") != NULL);
    CHECK(rv_profile_eval("BalanceV", 1.0, &value) == RV_STATUS_OK);
    CHECK(fabs(value - exp(-1.0)) < 1e-15);
    puts("ok");
    return 0;
}
