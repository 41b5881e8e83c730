#ifndef REVEALING_H
#define REVEALING_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

typedef enum RvStatus {
  RV_STATUS_OK = 0,
  RV_STATUS_NULL_POINTER = 1,
  RV_STATUS_INVALID_INPUT = 2,
  RV_STATUS_LENGTH_MISMATCH = 3,
  RV_STATUS_NOT_OPTIMAL = 4,
  RV_STATUS_PARSE = 5,
  RV_STATUS_IO = 6,
  RV_STATUS_PANIC = 7,
} RvStatus;

typedef enum RvSense {
  RV_SENSE_MINIMIZE = 0,
  RV_SENSE_MAXIMIZE = 1,
} RvSense;

typedef enum RvRelation {
  RV_RELATION_LE = 0,
  RV_RELATION_GE = 1,
  RV_RELATION_EQ = 2,
} RvRelation;

typedef enum RvSolveStatus {
  RV_SOLVE_STATUS_OPTIMAL = 0,
  RV_SOLVE_STATUS_INFEASIBLE = 1,
  RV_SOLVE_STATUS_UNBOUNDED = 2,
  RV_SOLVE_STATUS_ITERATION_LIMIT = 3,
} RvSolveStatus;

// Opaque LP handle.
typedef struct RvLp RvLp;

// Opaque solution handle.
typedef struct RvSolution RvSolution;

typedef struct RvCertificate {
  double primal_objective;
  double dual_objective;
  double gap;
  double max_primal_violation;
  double max_dual_violation;
  double max_complementarity;
  bool passed;
} RvCertificate;

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *rv_last_error_message(void);

// Builds family `family` ("toy", "balance", "ranking" or "secretary") at size `n`.
enum RvStatus rv_family_build(const char *family, size_t n, struct RvLp **out);

// New LP with `n_vars` variables in `[0, inf)` and no rows.
enum RvStatus rv_lp_new(enum RvSense sense,
                        const double *objective,
                        size_t n_vars,
                        struct RvLp **out);

enum RvStatus rv_lp_add_row(struct RvLp *lp,
                            const double *coeffs,
                            size_t len,
                            enum RvRelation relation,
                            double rhs);

// Sets variable bounds; an upper bound of `INFINITY` leaves the variable
// unbounded above.
enum RvStatus rv_lp_set_bounds(struct RvLp *lp,
                               const double *lower,
                               const double *upper,
                               size_t len);

// Number of variables, or 0 for a null handle.
size_t rv_lp_n_vars(const struct RvLp *lp);

// Number of rows, or 0 for a null handle.
size_t rv_lp_n_rows(const struct RvLp *lp);

void rv_lp_free(struct RvLp *lp);

// Solves `lp`. Infeasible or unbounded problems still succeed; read the
// outcome with `rv_solution_status`.
enum RvStatus rv_lp_solve(const struct RvLp *lp, struct RvSolution **out);

enum RvStatus rv_solution_status(const struct RvSolution *sol, enum RvSolveStatus *out);

enum RvStatus rv_solution_objective(const struct RvSolution *sol, double *out);

// Copies the primal vector into `buf`, which must hold exactly the number
// of variables.
enum RvStatus rv_solution_copy_x(const struct RvSolution *sol, double *buf, size_t len);

// Copies the row multipliers into `buf`, which must hold exactly the number
// of rows.
enum RvStatus rv_solution_copy_dual(const struct RvSolution *sol, double *buf, size_t len);

void rv_solution_free(struct RvSolution *sol);

// Duality certificate of an optimal solution at tolerance `tol`.
enum RvStatus rv_certify(const struct RvLp *lp,
                         const struct RvSolution *sol,
                         double tol,
                         struct RvCertificate *out);

// Optimal value of the toy or RANKING family through its tight recurrence.
enum RvStatus rv_recurrence_value(const char *family, size_t n, double *out);

// Evaluates a continuum profile such as "BalanceV" at `t` in `[0, 1]`.
enum RvStatus rv_profile_eval(const char *tag, double t, double *out);

// Interval objective for `points = a_1, b_1, ..., a_K, b_K`.
enum RvStatus rv_interval_objective(const double *points, size_t len, double *out);

// Success probability of the threshold rule that skips `k` of `n`
// candidates, rounded from the exact fraction.
enum RvStatus rv_threshold_policy_value(size_t n, size_t k, double *out);

#endif  /* REVEALING_H */
