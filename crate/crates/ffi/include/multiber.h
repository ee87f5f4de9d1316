#ifndef MULTIBER_H
#define MULTIBER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MbStatus {
  MB_STATUS_OK = 0,
  MB_STATUS_NULL_POINTER = 1,
  MB_STATUS_VALIDATION = 2,
  MB_STATUS_GENERICITY = 3,
  MB_STATUS_UTF8 = 4,
  MB_STATUS_INTERNAL = 5,
} MbStatus;

/**
 * Opaque handle to a validated system.
 */
typedef struct MbSystem MbSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the next call on this thread.
 */
const char *mb_last_error(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void mb_string_free(char *s);

/**
 * Parse and validate a JSON system description.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum MbStatus mb_system_from_json(const char *json, struct MbSystem **out);

/**
 * # Safety
 * `sys` must come from [`mb_system_from_json`] and not have been freed already. NULL is ignored.
 */
void mb_system_free(struct MbSystem *sys);

/**
 * # Safety
 * Pointers must be valid.
 */
enum MbStatus mb_system_rank(const struct MbSystem *sys, size_t *out);

/**
 * Tope polynomial at a regular point `"p1,...,pr"` (ambient coordinates), as text.
 *
 * # Safety
 * Pointers must be valid; the string written to `out` must be freed with [`mb_string_free`].
 */
enum MbStatus mb_ber_tope_poly(const struct MbSystem *sys, const char *at, char **out);

/**
 * Exact value at a regular point as `"p/q"`, and its nearest double when `approx` is not NULL.
 *
 * # Safety
 * Pointers must be valid; the string written to `out` must be freed with [`mb_string_free`].
 */
enum MbStatus mb_ber_eval(const struct MbSystem *sys, const char *at, char **out, double *approx);

/**
 * Jump polynomial from the tope of `at2` to the tope of `at1`.
 *
 * # Safety
 * Pointers must be valid; the string written to `out` must be freed with [`mb_string_free`].
 */
enum MbStatus mb_jump(const struct MbSystem *sys, const char *at1, const char *at2, char **out);

/**
 * Sum of the decomposition terms at `at` for the polarization point `beta`, as `"p/q"`.
 * `radius` may be NULL for the default search radius.
 *
 * # Safety
 * Pointers must be valid; the string written to `out` must be freed with [`mb_string_free`].
 */
enum MbStatus mb_decompose_eval(const struct MbSystem *sys,
                                const char *beta,
                                const char *at,
                                const char *radius,
                                char **out);

/**
 * Affine series value at `at`; constants missing from the description count as 0.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MbStatus mb_affine_eval(const struct MbSystem *sys, const char *at, double *re, double *im);

/**
 * Euler-MacLaurin check for `exp(-a|v - c|^2)`; `gaussian` is `"a,c1,...,cr"` in lattice coordinates.
 * Writes the absolute difference between the lattice sum and the corrected integral.
 *
 * # Safety
 * Pointers must be valid.
 */
enum MbStatus mb_em_error(const struct MbSystem *sys,
                          const char *gaussian,
                          uint32_t lattice_radius,
                          double quad_step,
                          double *abs_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTIBER_H */
