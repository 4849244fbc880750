#ifndef SUMREP_H
#define SUMREP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit by hand. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SumrepStatus {
  SUMREP_STATUS_OK = 0,
  SUMREP_STATUS_NULL_POINTER = 1,
  SUMREP_STATUS_NEGATIVE_ELEMENT = 2,
  SUMREP_STATUS_INVALID_PARAMETER = 3,
  SUMREP_STATUS_OVERFLOW = 4,
  SUMREP_STATUS_WINDOW_EMPTY = 5,
  SUMREP_STATUS_OUTSIDE_WINDOW = 6,
  SUMREP_STATUS_PREFIX_TOO_SHORT = 7,
  SUMREP_STATUS_NO_WITNESS = 8,
  SUMREP_STATUS_PARSE_ERROR = 9,
  SUMREP_STATUS_IO_ERROR = 10,
  SUMREP_STATUS_EMPTY_SET = 11,
  SUMREP_STATUS_BUFFER_TOO_SMALL = 12,
  SUMREP_STATUS_INTERNAL = 99,
} SumrepStatus;

typedef enum SumrepTheorem {
  SUMREP_THEOREM_T1 = 1,
  SUMREP_THEOREM_T2 = 2,
  SUMREP_THEOREM_T3 = 3,
} SumrepTheorem;

/**
 * Opaque theorem-report handle.
 */
typedef struct SumrepReport SumrepReport;

/**
 * Opaque set handle.
 */
typedef struct SumrepSet SumrepSet;

/**
 * Exactness window: `prefix == false` treats the set as complete;
 * otherwise the set is asserted to hold every element `<= bound`.
 */
typedef struct SumrepMode {
  bool prefix;
  uint64_t bound;
} SumrepMode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *sumrep_last_error(void);

/**
 * Static, NUL-terminated library version.
 */
const char *sumrep_version(void);

/**
 * Builds a set from signed values; negatives are rejected with
 * `SUMREP_STATUS_NEGATIVE_ELEMENT`. `values` may be NULL when `len == 0`.
 */
enum SumrepStatus sumrep_set_from_i64(const int64_t *values, size_t len, struct SumrepSet **out);

enum SumrepStatus sumrep_set_from_u64(const uint64_t *values, size_t len, struct SumrepSet **out);

/**
 * Loads a set file (one integer per line, `#` comments).
 */
enum SumrepStatus sumrep_set_load(const char *path, struct SumrepSet **out);

void sumrep_set_free(struct SumrepSet *set);

/**
 * Number of elements; 0 for NULL.
 */
size_t sumrep_set_len(const struct SumrepSet *set);

/**
 * Copies the sorted elements into `buf`. `*written` receives the set size;
 * if `cap` is smaller nothing is copied and `SUMREP_STATUS_BUFFER_TOO_SMALL`
 * is returned.
 */
enum SumrepStatus sumrep_set_elements(const struct SumrepSet *set,
                                      uint64_t *buf,
                                      size_t cap,
                                      size_t *written);

/**
 * Counting function `A(x)`: elements `a` with `1 <= a <= x`.
 */
enum SumrepStatus sumrep_counting(const struct SumrepSet *set, uint64_t x, uint64_t *out);

/**
 * Block index `k` with `h^(k-1) <= a < h^k`.
 */
enum SumrepStatus sumrep_block_of(uint64_t a, uint64_t h, uint32_t *out);

enum SumrepStatus sumrep_rep_count(const struct SumrepSet *set,
                                   uint64_t h,
                                   uint64_t n,
                                   uint64_t *out);

/**
 * Exhaustive-enumeration oracle; exponential in `h`.
 */
enum SumrepStatus sumrep_rep_count_naive(const struct SumrepSet *set,
                                         uint64_t h,
                                         uint64_t n,
                                         uint64_t *out);

/**
 * Writes `r(n)` for `n = lo, lo+1, ...` up to `min(hi, h max A)` into
 * `buf`; `*written` receives the number of entries.
 */
enum SumrepStatus sumrep_rep_table(const struct SumrepSet *set,
                                   uint64_t h,
                                   uint64_t lo,
                                   uint64_t hi,
                                   uint64_t *buf,
                                   size_t cap,
                                   size_t *written);

/**
 * `*holds` is true iff `r_{A,h}(n) <= s` on the exactness window.
 */
enum SumrepStatus sumrep_is_bhs(const struct SumrepSet *set,
                                uint64_t h,
                                uint64_t s,
                                struct SumrepMode mode,
                                bool *holds);

/**
 * Least `n0` for which `r_{A,h}(n) >= ell` holds on `[n0, bound]`;
 * `*found` is false when no such threshold exists.
 */
enum SumrepStatus sumrep_min_threshold(const struct SumrepSet *set,
                                       uint64_t h,
                                       uint64_t ell,
                                       struct SumrepMode mode,
                                       bool *found,
                                       uint64_t *n0);

/**
 * Full theorem check. `s` is ignored for T1 and T2; `ell` is ignored for
 * T1; `h` must be 2 for T2. A negative `n0` selects the least passing
 * threshold.
 */
enum SumrepStatus sumrep_theorem_run(const struct SumrepSet *set,
                                     enum SumrepTheorem theorem,
                                     uint64_t h,
                                     uint64_t ell,
                                     uint64_t s,
                                     struct SumrepMode mode,
                                     int64_t n0,
                                     struct SumrepReport **out);

void sumrep_report_free(struct SumrepReport *report);

/**
 * True iff the verdict is pass; false for NULL.
 */
bool sumrep_report_passed(const struct SumrepReport *report);

/**
 * `k0` and `n0` of the report; `*has` is false if the run stopped before
 * they were determined.
 */
enum SumrepStatus sumrep_report_k0(const struct SumrepReport *report,
                                   bool *has,
                                   uint64_t *n0,
                                   uint32_t *k0);

/**
 * `w0 = numer / denom` (reduced); `*has` as for `sumrep_report_k0`.
 */
enum SumrepStatus sumrep_report_w0(const struct SumrepReport *report,
                                   bool *has,
                                   uint64_t *numer,
                                   uint64_t *denom);

/**
 * The report as JSON. Free with `sumrep_string_free`. NULL on failure.
 */
char *sumrep_report_to_json(const struct SumrepReport *report);

void sumrep_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMREP_H */
