#ifndef ABMOD_H
#define ABMOD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum AbmodStatus {
  ABMOD_STATUS_OK = 0,
  ABMOD_STATUS_NULL_POINTER = 1,
  ABMOD_STATUS_INVALID_UTF8 = 2,
  /**
   * Parse or format error in the input.
   */
  ABMOD_STATUS_INVALID_INPUT = 3,
  /**
   * The module is not regular (saturation did not stabilize).
   */
  ABMOD_STATUS_NOT_REGULAR = 4,
  ABMOD_STATUS_NOT_GEOMETRIC = 5,
  /**
   * The working precision is too small for the request.
   */
  ABMOD_STATUS_PRECISION_TOO_LOW = 6,
  /**
   * Any other mathematical error.
   */
  ABMOD_STATUS_MATH_ERROR = 7,
  ABMOD_STATUS_PANIC = 8,
} AbmodStatus;

/**
 * Opaque handle to an (a,b)-module.
 */
typedef struct AbmodModule AbmodModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or null. Free with
 * `abmod_string_free`.
 */
char *abmod_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void abmod_string_free(char *s);

/**
 * Reads a module from its JSON form `{rank, precision, matrix}`.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum AbmodStatus abmod_module_from_json(const char *json, struct AbmodModule **out);

/**
 * Builds `Ã/ÃΠ` at precision `precision` from the text of `Π`, either a
 * product of factors `(a - λ b)` and `inv(S)` or a general element.
 *
 * # Safety
 * `text` must be a valid C string; `out` must be writable.
 */
enum AbmodStatus abmod_module_from_presentation(const char *text,
                                                size_t precision,
                                                struct AbmodModule **out);

/**
 * # Safety
 * `m` must be null or a handle returned by this library, not yet freed.
 */
void abmod_module_free(struct AbmodModule *m);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum AbmodStatus abmod_module_rank(const struct AbmodModule *m, size_t *out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum AbmodStatus abmod_module_precision(const struct AbmodModule *m, size_t *out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum AbmodStatus abmod_module_to_json(const struct AbmodModule *m, char **out);

/**
 * Bernstein polynomial as text, e.g. `x^2 + x + 1/4`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum AbmodStatus abmod_bernstein_polynomial(const struct AbmodModule *m, char **out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum AbmodStatus abmod_is_geometric(const struct AbmodModule *m, bool *out);

/**
 * Saturation: the saturated module, the number of enlarging steps and the
 * gap `δ` with `b^δ Ẽ ⊆ E`. `steps` and `gap` may be null.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum AbmodStatus abmod_saturate(const struct AbmodModule *m,
                                struct AbmodModule **out,
                                size_t *steps,
                                size_t *gap);

/**
 * Principal Jordan–Hölder λ-sequence of a fresco as a JSON array of
 * rationals, e.g. `["3/2","1/2"]`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum AbmodStatus abmod_principal_jh(const struct AbmodModule *m, char **out);

/**
 * Theme generated by an expansion given as a JSON array of
 * `{lambda, m, j, coeff}` terms. Writes a JSON object with `rank`,
 * `relation`, `module` and, when primitive, `fundamental_data`.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum AbmodStatus abmod_theme_of_expansion(const char *json, size_t shift_precision, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABMOD_H */
