#ifndef CUBIC_H
#define CUBIC_H

/* Generated by cbindgen from cubic-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; `CUBIC_OK` is zero, everything else is an error.
 */
typedef enum {
  CUBIC_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CUBIC_ERR_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  CUBIC_ERR_UTF8 = 2,
  /**
   * A spec, claim, or tuple failed to parse.
   */
  CUBIC_ERR_PARSE = 3,
  /**
   * Arguments parsed but violate a precondition.
   */
  CUBIC_ERR_INVALID_ARGUMENT = 4,
  /**
   * An index or depth exceeds the supported range.
   */
  CUBIC_ERR_OUT_OF_RANGE = 5,
  /**
   * An internal invariant failed (a bug; nothing was leaked or corrupted).
   */
  CUBIC_ERR_INTERNAL = 6,
} cubic_status;

/**
 * Opaque handle to a truncated integer-coefficient series.
 */
typedef struct cubic_series cubic_series;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *cubic_version(void);

/**
 * Releases a string allocated by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by a `cubic_*` function
 * and not yet freed.
 */
void cubic_string_free(char *s);

/**
 * Expands the eta-quotient-style product described by `spec`
 * (`delta:exponent,...`) to the inclusive truncation `order` and returns a
 * handle in `*out`.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string and `out` non-null.
 */
cubic_status cubic_series_expand(const char *spec, uint64_t order, cubic_series **out);

/**
 * Stores the inclusive truncation order of `series` in `*out`.
 *
 * # Safety
 * `series` must be a live handle from [`cubic_series_expand`]; `out`
 * non-null.
 */
cubic_status cubic_series_order(const cubic_series *series, uint64_t *out);

/**
 * Stores the coefficient of `q^index` as a decimal string in `*out`;
 * release it with [`cubic_string_free`].
 *
 * # Safety
 * `series` must be a live handle; `out` non-null.
 */
cubic_status cubic_series_coeff(const cubic_series *series, uint64_t index, char **out);

/**
 * Releases a series handle. Null is a no-op.
 *
 * # Safety
 * `series` must be null or a live handle not yet freed.
 */
void cubic_series_free(cubic_series *series);

/**
 * Computes `p_k(n)` exactly and stores it as a decimal string in `*out`.
 *
 * # Safety
 * `out` must be non-null.
 */
cubic_status cubic_pk(uint64_t k, uint64_t n, char **out);

/**
 * Computes `p_k(n) mod modulus` through the residue-ring pipeline and
 * stores it in `*out`.
 *
 * # Safety
 * `out` must be non-null.
 */
cubic_status cubic_pk_residue(uint64_t k, uint64_t n, uint64_t modulus, uint64_t *out);

/**
 * The double-counted divisor sum: divisors that are multiples of `k` count
 * twice.
 *
 * # Safety
 * `out` must be non-null.
 */
cubic_status cubic_sigma_k(uint64_t k, uint64_t n, uint64_t *out);

/**
 * Verifies the congruence claim given as a JSON document (the `claim`
 * object of the certificate schema). The full certificate JSON lands in
 * `*out_certificate` (free with [`cubic_string_free`]) and `*out_passed`
 * is 1 when the claim verified (for tuple-grounded claims that means
 * lemma-complete) and 0 otherwise.
 *
 * # Safety
 * `claim_json` must be a valid NUL-terminated string; the out-pointers
 * non-null.
 */
cubic_status cubic_verify_claim_json(const char *claim_json,
                                     char **out_certificate,
                                     int32_t *out_passed);

/**
 * Computes orbit, hypothesis table, and exact bound for the verification
 * tuple given as JSON (`{"m":..,"M":..,"N":..,"t":..,"r":"..","r_prime":".."}`)
 * and stores the report JSON in `*out_report`.
 *
 * # Safety
 * `tuple_json` must be a valid NUL-terminated string; `out_report`
 * non-null.
 */
cubic_status cubic_bound_json(const char *tuple_json, char **out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBIC_H */
