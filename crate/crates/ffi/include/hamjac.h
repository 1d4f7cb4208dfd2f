#ifndef HAMJAC_H
#define HAMJAC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result codes.
 */
typedef enum HjcStatus {
  HJC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HJC_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  HJC_STATUS_INVALID_UTF8 = 2,
  /**
   * The model or transformation text failed to parse.
   */
  HJC_STATUS_PARSE = 3,
  /**
   * The analysis rejected the model (unsupported, inconsistent, ...).
   */
  HJC_STATUS_ANALYSIS = 4,
  /**
   * A numeric argument was out of range.
   */
  HJC_STATUS_DOMAIN = 5,
  /**
   * An internal error; the library state is unaffected.
   */
  HJC_STATUS_INTERNAL = 6,
} HjcStatus;

/**
 * Report formats for [`hjc_analysis_report`].
 */
typedef enum HjcFormat {
  HJC_FORMAT_JSON = 0,
  HJC_FORMAT_TEXT = 1,
} HjcFormat;

/**
 * Opaque result of the symbolic pipeline.
 */
typedef struct HjcAnalysis HjcAnalysis;

/**
 * Options for [`hjc_integrate_csv`]. Curves are given as
 * `(start, slope)` pairs, i.e. `value(τ) = start + slope·τ`.
 */
typedef struct HjcIntegrateOptions {
  double tau_max;
  size_t steps;
  double e_start;
  double e_slope;
  double chi_start;
  double chi_slope;
  size_t odd_units;
  uint64_t seed;
  double mass;
  /**
   * Initial lower-index momentum.
   */
  double momentum[4];
} HjcIntegrateOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread (empty after a
 * success). The pointer stays valid until the next call on this thread.
 */
const char *hjc_last_error(void);

/**
 * Library version as a static string.
 */
const char *hjc_version(void);

/**
 * Parse and analyze a model. On success `*out` receives a new handle.
 *
 * # Safety
 * `model_text` must be a NUL-terminated string; `out` must be writable.
 */
enum HjcStatus hjc_analyze(const char *model_text, struct HjcAnalysis **out);

/**
 * Release a handle from [`hjc_analyze`]; null is ignored.
 *
 * # Safety
 * `analysis` must be null or a handle not yet freed.
 */
void hjc_analysis_free(struct HjcAnalysis *analysis);

/**
 * Render the analysis report.
 *
 * # Safety
 * `analysis` must be a live handle; `out` must be writable.
 */
enum HjcStatus hjc_analysis_report(const struct HjcAnalysis *analysis,
                                   enum HjcFormat format,
                                   char **out);

/**
 * Number of primary and secondary constraints.
 *
 * # Safety
 * `analysis` must be a live handle; the out-pointers must be writable.
 */
enum HjcStatus hjc_analysis_constraint_counts(const struct HjcAnalysis *analysis,
                                              size_t *primary,
                                              size_t *secondary);

/**
 * Default options: τ ∈ [0, 1], 1000 steps, e = 1, χ amplitude 0.3, six odd
 * units, seed 0, m = 1, rest-frame momentum.
 */
struct HjcIntegrateOptions hjc_integrate_options_default(void);

/**
 * Integrate the equations of motion and return the trajectory as CSV.
 *
 * # Safety
 * `analysis` must be a live handle, `options` readable, `out` writable.
 */
enum HjcStatus hjc_integrate_csv(const struct HjcAnalysis *analysis,
                                 const struct HjcIntegrateOptions *options,
                                 char **out);

/**
 * Dimension of the physical-state space `ker γ₅(p·γ − m)`.
 *
 * # Safety
 * `momentum` must point to four readable doubles; `out` must be writable.
 */
enum HjcStatus hjc_physical_state_dimension(const double *momentum, double mass, size_t *out);

/**
 * Vary the model's Lagrangian by a transformation; `*is_total` is set to 1
 * if the variation is a total τ-derivative and 0 otherwise.
 *
 * # Safety
 * Both texts must be NUL-terminated strings; `is_total` must be writable.
 */
enum HjcStatus hjc_vary(const char *model_text, const char *transformation_text, int *is_total);

/**
 * Release a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void hjc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HAMJAC_H */
