#ifndef POLYZETA_H
#define POLYZETA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * `None` selects the regularized value; `Plus`/`Minus` select the values
 * with `a ↦ ±iπ`.
 */
typedef enum PzSign {
  PZ_SIGN_NONE = 0,
  PZ_SIGN_PLUS = 1,
  PZ_SIGN_MINUS = 2,
} PzSign;

typedef enum PzStatus {
  PZ_STATUS_OK = 0,
  PZ_STATUS_NULL_POINTER = 1,
  PZ_STATUS_PARSE = 2,
  PZ_STATUS_DIVERGENT = 3,
  PZ_STATUS_PRECONDITION = 4,
  PZ_STATUS_PRECISION = 5,
  PZ_STATUS_INVALID_UTF8 = 6,
  PZ_STATUS_IO = 7,
  PZ_STATUS_PANIC = 8,
} PzStatus;

typedef enum PzTransform {
  PZ_TRANSFORM_BOX = 0,
  PZ_TRANSFORM_NABLA = 1,
  PZ_TRANSFORM_SIGMA = 2,
  PZ_TRANSFORM_TAU = 3,
  PZ_TRANSFORM_SIGMA_PRIME = 4,
} PzTransform;

/**
 * A word polynomial with rational coefficients.
 */
typedef struct PzPoly PzPoly;

/**
 * A truncated noncommutative series.
 */
typedef struct PzSeries PzSeries;

/**
 * A certified value with its error radius.
 */
typedef struct PzValue PzValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pz_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *pz_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void pz_string_free(char *s);

/**
 * Parses text such as `"ab - 2*aab + 1/3*b"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PzStatus pz_poly_parse(const char *text, struct PzPoly **out);

/**
 * # Safety
 * `p` must be NULL or a handle from this library, not used afterwards.
 */
void pz_poly_free(struct PzPoly *p);

/**
 * # Safety
 * `p` must be a valid handle; `out` must be writable.
 */
enum PzStatus pz_poly_to_string(const struct PzPoly *p, char **out);

/**
 * # Safety
 * `a`, `b` must be valid handles; `out` must be writable.
 */
enum PzStatus pz_poly_shuffle(const struct PzPoly *a, const struct PzPoly *b, struct PzPoly **out);

/**
 * # Safety
 * `p` must be a valid handle; `out` must be writable.
 */
enum PzStatus pz_poly_transform(const struct PzPoly *p, enum PzTransform kind, struct PzPoly **out);

/**
 * `ζ(parts[0], ..., parts[len-1])` to `digits` certified digits. `method` is
 * a method name such as `"thm7-half"` or `"cor12"`; NULL selects
 * `"thm7-half"`.
 *
 * # Safety
 * `parts` must point to `len` integers; `method` must be NULL or a
 * NUL-terminated string; `out` must be writable.
 */
enum PzStatus pz_zeta(const uint32_t *parts,
                      size_t len,
                      const char *method,
                      uint32_t digits,
                      struct PzValue **out);

/**
 * Regularized value of a word polynomial.
 *
 * # Safety
 * `p` must be a valid handle; `out` must be writable.
 */
enum PzStatus pz_zeta_reg(const struct PzPoly *p,
                          enum PzSign sign,
                          uint32_t digits,
                          struct PzValue **out);

/**
 * Decimal text of the value at its requested digits: `"x"`, `"x + yi"` or
 * `"x - yi"`.
 *
 * # Safety
 * `v` must be a valid handle; `out` must be writable.
 */
enum PzStatus pz_value_to_string(const struct PzValue *v, char **out);

/**
 * Upper bound on the error radius, e.g. `"1.3e-31"`.
 *
 * # Safety
 * `v` must be a valid handle; `out` must be writable.
 */
enum PzStatus pz_value_error_bound(const struct PzValue *v, char **out);

/**
 * Series terms summed; 0 for a NULL handle.
 *
 * # Safety
 * `v` must be NULL or a valid handle.
 */
uint64_t pz_value_terms_used(const struct PzValue *v);

/**
 * # Safety
 * `v` must be NULL or a handle from this library, not used afterwards.
 */
void pz_value_free(struct PzValue *v);

/**
 * A seeded random grouplike series truncated at `order` (at most 12).
 *
 * # Safety
 * `out` must be writable.
 */
enum PzStatus pz_series_random_grouplike(size_t order, uint64_t seed, struct PzSeries **out);

/**
 * # Safety
 * `a`, `b` must be valid handles; `out` must be writable.
 */
enum PzStatus pz_series_mul(const struct PzSeries *a,
                            const struct PzSeries *b,
                            struct PzSeries **out);

/**
 * # Safety
 * `g` must be a valid handle; `out` must be writable.
 */
enum PzStatus pz_series_inv(const struct PzSeries *g, struct PzSeries **out);

/**
 * Applies `Sigma`, `Tau` or `SigmaPrime` to a series; `Box` and `Nabla` are
 * rejected.
 *
 * # Safety
 * `g` must be a valid handle; `out` must be writable.
 */
enum PzStatus pz_series_transform(const struct PzSeries *g,
                                  enum PzTransform kind,
                                  struct PzSeries **out);

/**
 * # Safety
 * `g` must be a valid handle; `out` must be writable.
 */
enum PzStatus pz_series_is_grouplike(const struct PzSeries *g, bool *out);

/**
 * Exact pairing `Σ_w coeff(h, w)·coeff(g, w)` as rational text, e.g. `"-3/2"`.
 *
 * # Safety
 * `h`, `g` must be valid handles; `out` must be writable.
 */
enum PzStatus pz_series_pair(const struct PzPoly *h, const struct PzSeries *g, char **out);

/**
 * # Safety
 * `g` must be NULL or a handle from this library, not used afterwards.
 */
void pz_series_free(struct PzSeries *g);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYZETA_H */
