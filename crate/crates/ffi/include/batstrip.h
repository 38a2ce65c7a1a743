/* C interface of the batstrip coupler-design and optimizer library. */

#ifndef BATSTRIP_H
#define BATSTRIP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of one C API call.
 */
typedef enum BatstripStatus {
  /**
   * The call succeeded.
   */
  BatstripStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  BatstripStatus_NullPointer = 1,
  /**
   * An argument or parameter set failed validation.
   */
  BatstripStatus_InvalidInput = 2,
  /**
   * The optimization run aborted internally.
   */
  BatstripStatus_RunFailed = 3,
} BatstripStatus;

/**
 * Opaque optimizer parameter set; create with `batstrip_params_new`.
 */
typedef struct BatstripParams BatstripParams;

/**
 * Opaque result of one optimization run.
 */
typedef struct BatstripResult BatstripResult;

/**
 * Analysis outputs of one coupled-microstrip geometry.
 */
typedef struct BatstripAnalysis {
  /**
   * Strip width over substrate thickness.
   */
  double w_over_h;
  /**
   * Strip spacing over substrate thickness.
   */
  double s_over_h;
  /**
   * Spacing structure parameter.
   */
  double g;
  /**
   * Width-plus-spacing structure parameter.
   */
  double h_param;
  /**
   * Even-mode equivalent single-line shape ratio.
   */
  double whse;
  /**
   * Odd-mode equivalent single-line shape ratio.
   */
  double whso;
  /**
   * Even-mode impedance in ohms.
   */
  double zoe;
  /**
   * Odd-mode impedance in ohms.
   */
  double zoo;
  /**
   * Coupling coefficient.
   */
  double coupling;
} BatstripAnalysis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Analyzes one geometry and fills `out`.
 *
 * Fails with `InvalidInput` for non-positive dimensions or a dielectric
 * constant outside (1, 6).
 *
 * # Safety
 *
 * `out` must be null or valid for writing one `BatstripAnalysis`.
 */
enum BatstripStatus batstrip_analyze(double w,
                                     double s,
                                     double h,
                                     double eps_r,
                                     struct BatstripAnalysis *out);

/**
 * Allocates a parameter set preloaded with the library defaults.
 */
struct BatstripParams *batstrip_params_new(void);

/**
 * Releases a parameter set; accepts null.
 *
 * # Safety
 *
 * `params` must be null or a pointer from `batstrip_params_new` that has
 * not already been freed.
 */
void batstrip_params_free(struct BatstripParams *params);

/**
 * Sets the number of bats.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_pop_size(struct BatstripParams *params, uintptr_t value);

/**
 * Sets the lower frequency limit.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_fmin(struct BatstripParams *params, double value);

/**
 * Sets the upper frequency limit.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_fmax(struct BatstripParams *params, double value);

/**
 * Sets the loudness decay factor, in (0, 1).
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_alpha(struct BatstripParams *params, double value);

/**
 * Sets the pulse-rate growth rate, positive.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_gamma(struct BatstripParams *params, double value);

/**
 * Sets the pulse-rate ceiling, in (0, 1].
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_r0(struct BatstripParams *params, double value);

/**
 * Sets the initial loudness, positive.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_a0(struct BatstripParams *params, double value);

/**
 * Sets how many worst bats are replaced each iteration.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_replace_count(struct BatstripParams *params,
                                                      uintptr_t value);

/**
 * Sets the iteration budget.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_max_iter(struct BatstripParams *params, uintptr_t value);

/**
 * Sets the stopping tolerance on the best cost.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`.
 */
enum BatstripStatus batstrip_params_set_tol(struct BatstripParams *params, double value);

/**
 * Runs a coupler design toward `target_coupling` on substrate `eps_r`.
 *
 * `lower` and `upper` either both point at three values bounding
 * `(w, s, h)` or are both null to use the default box, 0.5 to 20 in each
 * dimension. On success `*out` receives an owned result handle.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`,
 * `lower` and `upper` must each be null or readable for three values, and
 * `out` must be null or valid for writing one pointer.
 */
enum BatstripStatus batstrip_design_run(const struct BatstripParams *params,
                                        double target_coupling,
                                        double eps_r,
                                        const double *lower,
                                        const double *upper,
                                        uint64_t seed,
                                        struct BatstripResult **out);

/**
 * Runs a benchmark function (`"sphere"`, `"rosenbrock"`, or
 * `"rastrigin"`) at the given dimensionality on its conventional domain.
 *
 * On success `*out` receives an owned result handle.
 *
 * # Safety
 *
 * `params` must be null or a live pointer from `batstrip_params_new`,
 * `function` must be null or a NUL-terminated string, and `out` must be
 * null or valid for writing one pointer.
 */
enum BatstripStatus batstrip_bench_run(const struct BatstripParams *params,
                                       const char *function,
                                       uintptr_t dims,
                                       uint64_t seed,
                                       struct BatstripResult **out);

/**
 * Releases a run result; accepts null.
 *
 * # Safety
 *
 * `result` must be null or a pointer from a `*_run` call that has not
 * already been freed.
 */
void batstrip_result_free(struct BatstripResult *result);

/**
 * Best cost found; NaN for a null handle.
 *
 * # Safety
 *
 * `result` must be null or a live pointer from a `*_run` call.
 */
double batstrip_result_best_fitness(const struct BatstripResult *result);

/**
 * Iterations executed; 0 for a null handle.
 *
 * # Safety
 *
 * `result` must be null or a live pointer from a `*_run` call.
 */
uintptr_t batstrip_result_iterations(const struct BatstripResult *result);

/**
 * True when the run stopped by reaching the tolerance.
 *
 * # Safety
 *
 * `result` must be null or a live pointer from a `*_run` call.
 */
bool batstrip_result_reached_tolerance(const struct BatstripResult *result);

/**
 * Dimensionality of the best position; 0 for a null handle.
 *
 * # Safety
 *
 * `result` must be null or a live pointer from a `*_run` call.
 */
uintptr_t batstrip_result_dims(const struct BatstripResult *result);

/**
 * Copies the best position into `out`, which must hold exactly
 * `batstrip_result_dims` values.
 *
 * # Safety
 *
 * `result` must be null or a live pointer from a `*_run` call, and `out`
 * must be null or valid for writing `len` values.
 */
enum BatstripStatus batstrip_result_best_position(const struct BatstripResult *result,
                                                  double *out,
                                                  uintptr_t len);

/**
 * Number of convergence records; 0 for a null handle.
 *
 * # Safety
 *
 * `result` must be null or a live pointer from a `*_run` call.
 */
uintptr_t batstrip_result_history_len(const struct BatstripResult *result);

/**
 * Best cost recorded after iteration `index + 1`.
 *
 * # Safety
 *
 * `result` must be null or a live pointer from a `*_run` call, and `out`
 * must be null or valid for writing one value.
 */
enum BatstripStatus batstrip_result_history_fitness(const struct BatstripResult *result,
                                                    uintptr_t index,
                                                    double *out);

/**
 * Library version as a static C string.
 */
const char *batstrip_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BATSTRIP_H */
