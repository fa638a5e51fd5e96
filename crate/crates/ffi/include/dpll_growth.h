#ifndef DPLL_GROWTH_H
#define DPLL_GROWTH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DgStatus {
  DG_STATUS_OK = 0,
  DG_STATUS_NULL_POINTER = 1,
  DG_STATUS_INVALID_ARGUMENT = 2,
  DG_STATUS_PARSE = 3,
  DG_STATUS_RESOURCE = 4,
  DG_STATUS_SATISFIABLE = 5,
  DG_STATUS_UNSUPPORTED = 6,
  DG_STATUS_NUMERIC = 7,
  DG_STATUS_NO_HALT = 8,
  DG_STATUS_IO = 9,
  DG_STATUS_BUFFER_TOO_SMALL = 10,
  DG_STATUS_PANIC = 11,
} DgStatus;

typedef enum DgHeuristic {
  DG_HEURISTIC_UC = 0,
  DG_HEURISTIC_GUC = 1,
  DG_HEURISTIC_SC1 = 2,
} DgHeuristic;

/**
 * Opaque CNF instance.
 */
typedef struct DgInstance DgInstance;

typedef struct DgSolveResult {
  bool satisfiable;
  uint64_t q_splits;
  uint64_t b_leaves;
} DgSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses DIMACS text into a new instance.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DgStatus dg_instance_from_dimacs(const char *text, struct DgInstance **out);

/**
 * Random 3-SAT with round(alpha·n) clauses.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DgStatus dg_instance_random_3sat(size_t n_vars,
                                      double alpha,
                                      uint64_t seed,
                                      struct DgInstance **out);

/**
 * # Safety
 * `inst` must come from this library and not be used afterwards. Null is
 * ignored.
 */
void dg_instance_free(struct DgInstance *inst);

/**
 * # Safety
 * `inst` and `out` must be valid pointers.
 */
enum DgStatus dg_instance_n_vars(const struct DgInstance *inst, size_t *out);

/**
 * Runs DPLL once.
 *
 * # Safety
 * `inst` and `out` must be valid pointers.
 */
enum DgStatus dg_solve(const struct DgInstance *inst,
                       enum DgHeuristic heuristic,
                       uint64_t seed,
                       struct DgSolveResult *out);

/**
 * Exact stationary tree size of an unsatisfiable instance. The rational
 * B* is written as "num/den" into `buf` when it is non-null.
 *
 * # Safety
 * `inst`, `t_star` and `b_star` must be valid; `buf` must hold `buf_len`
 * bytes when non-null.
 */
enum DgStatus dg_oracle_stationary(const struct DgInstance *inst,
                                   enum DgHeuristic heuristic,
                                   size_t *t_star,
                                   double *b_star,
                                   char *buf,
                                   size_t buf_len);

/**
 * Search-tree growth exponent in bits per variable for 3-SAT at `alpha0`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DgStatus dg_omega_theory(double alpha0, enum DgHeuristic heuristic, double *out);

/**
 * Largest 3-SAT ratio whose branch trajectory stays in the sat phase.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DgStatus dg_alpha_l(enum DgHeuristic heuristic, double *out);

/**
 * Copies the calling thread's last error message into `buf` and returns
 * its length without the terminator, or -1 when `buf` is too small.
 *
 * # Safety
 * `buf` must hold `buf_len` bytes.
 */
ptrdiff_t dg_last_error_message(char *buf, size_t buf_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DPLL_GROWTH_H */
