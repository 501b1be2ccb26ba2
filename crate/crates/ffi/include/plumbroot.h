#ifndef PLUMBROOT_H
#define PLUMBROOT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every call. Library errors keep the kind reported by the CLI.
 */
typedef enum PlumbrootStatus {
  PLUMBROOT_STATUS_OK = 0,
  PLUMBROOT_STATUS_NULL_ARGUMENT = 1,
  PLUMBROOT_STATUS_INVALID_UTF8 = 2,
  PLUMBROOT_STATUS_MALFORMED_INPUT = 3,
  PLUMBROOT_STATUS_IO = 4,
  PLUMBROOT_STATUS_NOT_A_TREE = 5,
  PLUMBROOT_STATUS_BAD_INDEX = 6,
  PLUMBROOT_STATUS_NOT_NEGATIVE_DEFINITE = 7,
  PLUMBROOT_STATUS_NOT_CHARACTERISTIC = 8,
  PLUMBROOT_STATUS_NOT_DELTA_PARITY = 9,
  PLUMBROOT_STATUS_MOVE_NOT_APPLICABLE = 10,
  PLUMBROOT_STATUS_MOVE_MISMATCH = 11,
  PLUMBROOT_STATUS_GENERATION_FAILED = 12,
  PLUMBROOT_STATUS_SEEDS_EXHAUSTED = 13,
  PLUMBROOT_STATUS_A3_VIOLATED = 14,
  PLUMBROOT_STATUS_NOT_STABILIZED = 15,
  PLUMBROOT_STATUS_AMBIGUOUS_SPINC = 16,
  /**
   * A bug inside the library; the message carries the panic text.
   */
  PLUMBROOT_STATUS_INTERNAL = 99,
} PlumbrootStatus;

/**
 * A plumbing together with one characteristic vector.
 */
typedef struct PlumbrootContext PlumbrootContext;

/**
 * A validated plumbing tree.
 */
typedef struct PlumbrootPlumbing PlumbrootPlumbing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *plumbroot_last_error(void);

/**
 * Library version as a static string.
 */
const char *plumbroot_version(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void plumbroot_string_free(char *s);

/**
 * Parses `{"weights": [...], "edges": [[i, j], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum PlumbrootStatus plumbroot_plumbing_from_json(const char *json, struct PlumbrootPlumbing **out);

/**
 * Builds a plumbing from `n` weights and `n_edges` edges given as
 * consecutive index pairs in `edges[0 .. 2 * n_edges]`.
 *
 * # Safety
 * Arrays must hold the stated number of elements; `out` must be writable.
 */
enum PlumbrootStatus plumbroot_plumbing_new(const int64_t *weights,
                                            size_t n,
                                            const size_t *edges,
                                            size_t n_edges,
                                            struct PlumbrootPlumbing **out);

/**
 * # Safety
 * `p` must come from this library and not have been freed already.
 */
void plumbroot_plumbing_free(struct PlumbrootPlumbing *p);

/**
 * Number of vertices; 0 for NULL.
 *
 * # Safety
 * `p` must be NULL or a live handle.
 */
size_t plumbroot_plumbing_len(const struct PlumbrootPlumbing *p);

/**
 * `|det M|`, the number of spin^c classes.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PlumbrootStatus plumbroot_plumbing_spinc_count(const struct PlumbrootPlumbing *p,
                                                    uint64_t *out);

/**
 * Writes the representative of class `index` into `k[0 .. len]`, where
 * `len` must equal the number of vertices.
 *
 * # Safety
 * `p` must be a live handle; `k` must have room for `len` values.
 */
enum PlumbrootStatus plumbroot_plumbing_spinc(const struct PlumbrootPlumbing *p,
                                              uint64_t index,
                                              int64_t *k,
                                              size_t len);

/**
 * Pairs a plumbing with a characteristic vector `k[0 .. len]`. The context
 * keeps its own copy of the plumbing.
 *
 * # Safety
 * `p` must be a live handle; `k` must hold `len` values; `out` writable.
 */
enum PlumbrootStatus plumbroot_context_new(const struct PlumbrootPlumbing *p,
                                           const int64_t *k,
                                           size_t len,
                                           struct PlumbrootContext **out);

/**
 * # Safety
 * `c` must come from this library and not have been freed already.
 */
void plumbroot_context_free(struct PlumbrootContext *c);

/**
 * Minimum of `chi_k` over the lattice.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum PlumbrootStatus plumbroot_context_chi_min(const struct PlumbrootContext *c, int64_t *out);

/**
 * Level from which every sublevel set is connected.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum PlumbrootStatus plumbroot_context_auto_top(const struct PlumbrootContext *c, int64_t *out);

/**
 * The d-invariant as `"p/q"`.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum PlumbrootStatus plumbroot_context_d_invariant(const struct PlumbrootContext *c, char **out);

/**
 * Two-variable series through `q^{Delta + order}` as a JSON array of
 * `{"q", "t", "c"}` terms. `order` is `"p/q"`; `family` as for the CLI, or
 * a JSON seed list, NULL meaning `fhat`.
 *
 * # Safety
 * `c` must be a live handle; strings NUL-terminated; `out` writable.
 */
enum PlumbrootStatus plumbroot_series_json(const struct PlumbrootContext *c,
                                           const char *family,
                                           const char *order,
                                           char **out);

/**
 * The series at `t = 1` as a JSON array of `{"q", "c"}` terms.
 *
 * # Safety
 * As for [`plumbroot_series_json`].
 */
enum PlumbrootStatus plumbroot_zhat_json(const struct PlumbrootContext *c,
                                         const char *family,
                                         const char *order,
                                         char **out);

/**
 * The weighted graded root in HF grading, as the CLI's JSON object. With
 * `auto_top` set, `top` is ignored.
 *
 * # Safety
 * `c` must be a live handle; `family` NULL or NUL-terminated; `out` writable.
 */
enum PlumbrootStatus plumbroot_root_json(const struct PlumbrootContext *c,
                                         const char *family,
                                         int64_t top,
                                         bool auto_top,
                                         char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLUMBROOT_H */
