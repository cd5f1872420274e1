#ifndef MITTAG_LEFFLER_H
#define MITTAG_LEFFLER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Selects the representation in [`mlf_evaluator_set_contour`].
 */
#define MLF_REP_A 0

#define MLF_REP_B 1

/**
 * Selects the contour shape in [`mlf_evaluator_set_contour`].
 */
#define MLF_CONTOUR_P1 1

#define MLF_CONTOUR_P2 2

#define MLF_CONTOUR_P3 3

/**
 * Result code of every `mlf_*` call.
 */
typedef enum MlfStatus {
  MLF_STATUS_OK = 0,
  MLF_STATUS_NULL_POINTER = 1,
  MLF_STATUS_INVALID_PARAM = 2,
  MLF_STATUS_INADMISSIBLE = 3,
  MLF_STATUS_QUADRATURE = 4,
  MLF_STATUS_SERIES = 5,
  MLF_STATUS_PANIC = 6,
} MlfStatus;

/**
 * How a value was obtained.
 */
typedef enum MlfMethod {
  MLF_METHOD_REP_A1 = 1,
  MLF_METHOD_REP_A2 = 2,
  MLF_METHOD_REP_A3 = 3,
  MLF_METHOD_REP_B_CASE1 = 11,
  MLF_METHOD_REP_B_CASE2 = 12,
  MLF_METHOD_REP_B_CASE3 = 13,
  MLF_METHOD_REP_B_CASE4 = 14,
  MLF_METHOD_REP_B_CASE5 = 15,
  MLF_METHOD_REP_B_CASE6 = 16,
  MLF_METHOD_SERIES = 20,
  MLF_METHOD_CLOSED_FORM = 21,
} MlfMethod;

/**
 * Opaque evaluator handle.
 */
typedef struct MlfEvaluator MlfEvaluator;

typedef struct MlfResult {
  double re;
  double im;
  /**
   * Absolute error estimate.
   */
  double abs_err;
  enum MlfMethod method;
  /**
   * Number of warnings; the text is available from [`mlf_last_warnings`].
   */
  uint32_t warning_count;
} MlfResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an evaluator for `E_{rho,mu}` with `mu = mu_re + i mu_im` and the
 * automatic strategy. The handle must be released with [`mlf_evaluator_free`].
 *
 * # Safety
 * `out` must be null or point to writable storage for one pointer.
 */
enum MlfStatus mlf_evaluator_new(double rho, double mu_re, double mu_im, struct MlfEvaluator **out);

/**
 * Releases an evaluator. Null is ignored.
 *
 * # Safety
 * `ev` must be null or a handle from [`mlf_evaluator_new`] not yet freed.
 */
void mlf_evaluator_free(struct MlfEvaluator *ev);

/**
 * Sets the relative and absolute quadrature tolerances.
 *
 * # Safety
 * `ev` must be null or a live handle.
 */
enum MlfStatus mlf_evaluator_set_tolerances(struct MlfEvaluator *ev, double rtol, double atol);

/**
 * Pins the representation (`MLF_REP_A` or `MLF_REP_B`) and contour shape
 * (`MLF_CONTOUR_P1/P2/P3`). `delta1` and `delta2` are used by P1, `delta1`
 * alone by P2. A NaN `eps` picks the ray offset per point; a NaN `eps1`
 * keeps the default detour radius.
 *
 * # Safety
 * `ev` must be null or a live handle.
 */
enum MlfStatus mlf_evaluator_set_contour(struct MlfEvaluator *ev,
                                         int32_t rep,
                                         int32_t mode,
                                         double delta1,
                                         double delta2,
                                         double eps,
                                         double eps1);

/**
 * Returns to the automatic strategy.
 *
 * # Safety
 * `ev` must be null or a live handle.
 */
enum MlfStatus mlf_evaluator_set_auto(struct MlfEvaluator *ev);

/**
 * Enables (nonzero) or disables (zero) replacing a failed pinned integral
 * by the series. The automatic strategy always falls back.
 *
 * # Safety
 * `ev` must be null or a live handle.
 */
enum MlfStatus mlf_evaluator_set_fallback(struct MlfEvaluator *ev, int32_t enabled);

/**
 * Evaluates `E_{rho,mu}(t e^{i theta})`.
 *
 * # Safety
 * `ev` must be null or a live handle; `out` must be null or writable.
 */
enum MlfStatus mlf_evaluate(const struct MlfEvaluator *ev,
                            double t,
                            double theta,
                            struct MlfResult *out);

/**
 * Sums the power series at `z = re + i im` without an evaluator.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum MlfStatus mlf_series(double rho,
                          double mu_re,
                          double mu_im,
                          double re,
                          double im,
                          struct MlfResult *out);

/**
 * `1 / Gamma(re + i im)`, exactly zero at the poles of Gamma.
 *
 * # Safety
 * `out_re` and `out_im` must be null or writable.
 */
enum MlfStatus mlf_recip_gamma(double re, double im, double *out_re, double *out_im);

/**
 * Copies the last error message of this thread into `buf` (`len` bytes,
 * NUL-terminated, truncated if short). Returns the size needed including
 * the terminator, so a null `buf` queries the length.
 *
 * # Safety
 * `buf` must be null or hold at least `len` bytes.
 */
size_t mlf_last_error(char *buf, size_t len);

/**
 * Like [`mlf_last_error`] for the warnings of the last successful
 * evaluation on this thread, one per line.
 *
 * # Safety
 * `buf` must be null or hold at least `len` bytes.
 */
size_t mlf_last_warnings(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mlf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MITTAG_LEFFLER_H */
