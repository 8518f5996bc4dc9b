#ifndef CUBELIN_H
#define CUBELIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CubelinStatus {
  CUBELIN_STATUS_OK = 0,
  CUBELIN_STATUS_NULL_POINTER = 1,
  CUBELIN_STATUS_INVALID_UTF8 = 2,
  CUBELIN_STATUS_PARSE_ERROR = 3,
  CUBELIN_STATUS_INVALID_INPUT = 4,
  CUBELIN_STATUS_UNSUPPORTED = 5,
  /**
   * The call completed and its output is valid, but it reports an anomaly.
   */
  CUBELIN_STATUS_ANOMALY = 6,
  CUBELIN_STATUS_INTERNAL = 7,
} CubelinStatus;

/**
 * Opaque square-or-rectangular matrix over `Q(i)`.
 */
typedef struct CubelinMatrix CubelinMatrix;

/**
 * Rank-bound certificate, as filled by [`cubelin_verify`].
 */
typedef struct CubelinCertificate {
  bool trace_condition_holds;
  size_t delta;
  size_t rank;
  size_t bound_times_two;
  bool theorem_satisfied;
} CubelinCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON array of rows of complex literals into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum CubelinStatus cubelin_matrix_parse(const char *json, struct CubelinMatrix **out);

/**
 * Loads a built-in example (`paper-example`, `shear-2`, `zero-3`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum CubelinStatus cubelin_matrix_example(const char *name, struct CubelinMatrix **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `m` must come from this library and not be used afterwards.
 */
void cubelin_matrix_free(struct CubelinMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `rows` and `cols` must be writable.
 */
enum CubelinStatus cubelin_matrix_dim(const struct CubelinMatrix *m, size_t *rows, size_t *cols);

/**
 * Canonical JSON form of the matrix.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum CubelinStatus cubelin_matrix_to_json(const struct CubelinMatrix *m, char **out);

/**
 * Fills the rank-bound certificate. Returns `Anomaly` if the bound fails
 * under the trace condition.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum CubelinStatus cubelin_verify(const struct CubelinMatrix *m, struct CubelinCertificate *out);

/**
 * Nilpotency of the Jacobian of the cubic part.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum CubelinStatus cubelin_is_keller(const struct CubelinMatrix *m, bool *out);

/**
 * Decides invertibility and writes the result as JSON. `degree_bound = 0`
 * selects the default `3^(n-1)`. Returns `Anomaly` (with output) when a
 * Keller map is not inverted within the default bound.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum CubelinStatus cubelin_invert(const struct CubelinMatrix *m, uint32_t degree_bound, char **out);

/**
 * Reduction to the paired map in dimension `rank(A)`, as JSON.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum CubelinStatus cubelin_reduce(const struct CubelinMatrix *m, char **out);

/**
 * The nonzero-diagonal inversion pipeline for `n ≤ 9`, as JSON. Larger
 * matrices give `Unsupported`; a failed step gives `Anomaly` with output.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum CubelinStatus cubelin_corollary(const struct CubelinMatrix *m, char **out);

/**
 * Runs a search from a JSON config and writes the summary JSON. A nonzero
 * `workers` overrides the config. Returns `Anomaly` (with output) if any
 * candidate is anomalous.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `out` must be writable.
 */
enum CubelinStatus cubelin_search(const char *config_json, size_t workers, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void cubelin_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next library call on the same thread.
 */
const char *cubelin_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cubelin_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBELIN_H */
