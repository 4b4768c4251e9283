/* C interface to the dedekind-cluster library. */

#ifndef DEDEKIND_CLUSTER_H
#define DEDEKIND_CLUSTER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum DcStatus {
  /**
   * Success.
   */
  DC_STATUS_OK = 0,
  /**
   * An argument was outside the mathematical domain or malformed.
   */
  DC_STATUS_INVALID_ARGUMENT = 1,
  /**
   * A required pointer was null.
   */
  DC_STATUS_NULL_POINTER = 2,
  /**
   * A string argument was not valid UTF-8.
   */
  DC_STATUS_INVALID_UTF8 = 3,
  /**
   * Disjointness could not be decided at the refinement cap.
   */
  DC_STATUS_UNDECIDED = 4,
  /**
   * An internal consistency check failed.
   */
  DC_STATUS_INTERNAL_ERROR = 5,
} DcStatus;

/**
 * Opaque handle to a partial-quotient expansion of `x(b)`.
 */
typedef struct DcExpansion DcExpansion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *dc_last_error_message(void);

/**
 * Release a string allocated by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned through one of the string
 * out-parameters, not yet freed; null is accepted and ignored.
 */
void dc_string_free(char *s);

/**
 * Build the expansion of `x(b)` with `2^level` partial quotients.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum DcStatus dc_expansion_new(uint64_t b, uint32_t level, struct DcExpansion **out);

/**
 * Release an expansion handle; null is accepted and ignored.
 *
 * # Safety
 * `e` must come from `dc_expansion_new` and not have been freed already.
 */
void dc_expansion_free(struct DcExpansion *e);

/**
 * Number of stored partial quotients.
 *
 * # Safety
 * `e` must be a live handle from `dc_expansion_new`.
 */
uint64_t dc_expansion_len(const struct DcExpansion *e);

/**
 * The partial quotient `a_k` (1-based).
 *
 * # Safety
 * `e` must be a live handle; `out` must be writable.
 */
enum DcStatus dc_expansion_quotient(const struct DcExpansion *e, uint64_t k, uint64_t *out);

/**
 * The alternating integer part `L(k) = sum_{j<=k} (-1)^(j-1) a_j`.
 *
 * # Safety
 * `e` must be a live handle; `out` must be writable.
 */
enum DcStatus dc_integer_part(const struct DcExpansion *e, uint64_t k, int64_t *out);

/**
 * Classical Dedekind sum of a coprime pair: writes `s(m/n)` and
 * `S(m/n) = 12 s(m/n)` as `"p/q"` strings.
 *
 * # Safety
 * `out_s` and `out_scaled` must be writable pointer slots.
 */
enum DcStatus dc_dedekind_sum(int64_t m, int64_t n, char **out_s, char **out_scaled);

/**
 * `S(s_k/t_k)` along the expansion, via the closed form, as a `"p/q"`
 * string.
 *
 * # Safety
 * `e` must be a live handle; `out_scaled` must be writable.
 */
enum DcStatus dc_convergent_sum(const struct DcExpansion *e, uint64_t k, char **out_scaled);

/**
 * Certified enclosure of `x(b) = sum 1/b^(2^j)` of width at most `eps`
 * (`eps` is an exact decimal such as `"1e-12"`). Writes the two endpoints
 * as `"p/q"` strings.
 *
 * # Safety
 * `eps` must be a NUL-terminated string; the out slots must be writable.
 */
enum DcStatus dc_fredholm_enclosure(uint64_t b, const char *eps, char **out_lo, char **out_hi);

/**
 * Enclosure of the cluster value `b - 10 - 2i + x + 1/t(k_{i,l})`.
 *
 * # Safety
 * `eps` must be a NUL-terminated string; the out slots must be writable.
 */
enum DcStatus dc_cluster_limit(uint64_t b,
                               uint32_t i,
                               uint32_t l,
                               const char *eps,
                               char **out_lo,
                               char **out_hi);

/**
 * Desk-scale cluster verification for `(b, i)` with `r` values and shifts
 * up to `nhat_max`: disjoint enclosures inside the predicted interval and
 * strictly improving sampled sums. Writes the overall outcome.
 *
 * # Safety
 * `eps` must be a NUL-terminated string; `out_pass` must be writable.
 */
enum DcStatus dc_cluster_check(uint64_t b,
                               uint32_t i,
                               uint32_t r,
                               const char *eps,
                               uint64_t nhat_max,
                               bool *out_pass);

/**
 * Run the identity-verification suite (quotient symmetries and the
 * integer-part identities) over the grid `n <= max_n`, `i <= max_i`,
 * `r <= max_r`. Writes whether every check passed.
 *
 * # Safety
 * `out_pass` must be writable.
 */
enum DcStatus dc_verify_suite(uint64_t b,
                              uint64_t max_n,
                              uint32_t max_i,
                              uint32_t max_r,
                              bool *out_pass);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DEDEKIND_CLUSTER_H */
