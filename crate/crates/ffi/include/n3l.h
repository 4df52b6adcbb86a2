#ifndef N3L_H
#define N3L_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  N3L_STATUS_OK = 0,
  N3L_STATUS_NULL_POINTER = 1,
  N3L_STATUS_INVALID_UTF8 = 2,
  N3L_STATUS_CONTRACT_VIOLATION = 3,
  N3L_STATUS_DOMAIN = 4,
  N3L_STATUS_DEGENERATE_BALL = 5,
  N3L_STATUS_DEGENERATE_LINE = 6,
  N3L_STATUS_INTERNAL = 7,
  N3L_STATUS_PARSE = 8,
  N3L_STATUS_IO = 9,
  N3L_STATUS_PANIC = 10,
} N3lStatus;

/**
 * A verified-or-not point set.
 */
typedef struct N3lPointSet N3lPointSet;

/**
 * Outcome of [`n3l_solve`].
 */
typedef struct N3lSolveResult N3lSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Description of the last failure on this thread, or an empty string. Valid
 * until the next n3l call on the same thread.
 */
const char *n3l_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from an n3l out-parameter and not be freed twice.
 */
void n3l_string_free(char *s);

/**
 * Builds a point set from `count` points of `dim` coordinates each, laid
 * out row-major in `coords`.
 *
 * # Safety
 * `coords` must point to `dim * count` readable values (may be null when
 * `count` is 0); `out` must be writable.
 */
N3lStatus n3l_point_set_new(size_t dim, const int64_t *coords, size_t count, N3lPointSet **out);

/**
 * Parses points-file text. `dim_hint` of 0 means no hint.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
N3lStatus n3l_point_set_parse(const char *text, size_t dim_hint, N3lPointSet **out);

/**
 * # Safety
 * `set` must come from this library and not be freed twice. Null is ignored.
 */
void n3l_point_set_free(N3lPointSet *set);

/**
 * Number of points, or 0 for null.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t n3l_point_set_len(const N3lPointSet *set);

/**
 * Dimension, or 0 for null.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t n3l_point_set_dim(const N3lPointSet *set);

/**
 * Copies the coordinates of point `index` into `buf`, which holds `buf_len`
 * values and must fit the dimension.
 *
 * # Safety
 * `set` must be a live handle and `buf` writable for `buf_len` values.
 */
N3lStatus n3l_point_set_point(const N3lPointSet *set, size_t index, int64_t *buf, size_t buf_len);

/**
 * Checks `set` for collinear triples. On failure and when `witness` is not
 * null, the triple is written there as `3 * dim` coordinates.
 *
 * # Safety
 * `set` must be a live handle, `pass` writable, `witness` null or writable
 * for `3 * dim` values.
 */
N3lStatus n3l_verify(const N3lPointSet *set, bool *pass, int64_t *witness);

/**
 * Exact maximum over `{1..n}^d`. `time_limit_ms` of 0 means unlimited.
 *
 * # Safety
 * `out` must be writable.
 */
N3lStatus n3l_solve(uint64_t n,
                    size_t d,
                    size_t threads,
                    uint64_t time_limit_ms,
                    bool symmetry,
                    N3lSolveResult **out);

/**
 * # Safety
 * `r` must come from [`n3l_solve`] and not be freed twice. Null is ignored.
 */
void n3l_solve_result_free(N3lSolveResult *r);

/**
 * Size of the best set found, or 0 for null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t n3l_solve_result_max(const N3lSolveResult *r);

/**
 * Whether the search completed, or false for null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
bool n3l_solve_result_optimal(const N3lSolveResult *r);

/**
 * Copies the witness into a new point set handle.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
N3lStatus n3l_solve_result_witness(const N3lSolveResult *r, N3lPointSet **out);

/**
 * Exact squared gap of `x` (comma-separated rationals such as `"2,3"`) at
 * scale `m` (`"p/q"`), written as a `"p/q"` string.
 *
 * # Safety
 * `x` and `m` must be nul-terminated strings; `out` must be writable.
 */
N3lStatus n3l_gap_squared(const char *x, const char *m, char **out);

/**
 * Runs a claim check and writes its report as JSON. `n` of 0 means
 * `max_coord` for the gap-shell claim.
 *
 * # Safety
 * `claim` and `scale` must be nul-terminated strings; `out` must be writable.
 */
N3lStatus n3l_claim_report(const char *claim,
                           size_t d,
                           uint64_t max_coord,
                           const char *scale,
                           uint64_t n,
                           char **out);

/**
 * `n^(d−1) · d^(1/(2d))`.
 *
 * # Safety
 * `out` must be writable.
 */
N3lStatus n3l_paper_bound(uint64_t n, size_t d, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* N3L_H */
