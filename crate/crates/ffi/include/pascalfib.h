#ifndef PASCALFIB_H
#define PASCALFIB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define PF_KIND_LEFT 0

#define PF_KIND_RIGHT 1

typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_NULL_POINTER = 1,
  PF_STATUS_INVALID_ARGUMENT = 2,
  PF_STATUS_NOT_PRIME = 3,
  PF_STATUS_NOT_UNIMODULAR = 4,
  PF_STATUS_DIMENSION_MISMATCH = 5,
  PF_STATUS_SINGULAR = 6,
  PF_STATUS_PARSE = 7,
  PF_STATUS_OVERFLOW = 8,
  PF_STATUS_PANIC = 9,
  PF_STATUS_INTERNAL = 10,
} PfStatus;

/**
 * Exact integer matrix.
 */
typedef struct PfMatrix PfMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or NULL. Owned by
 * the library; valid until the next failing call on the same thread.
 */
const char *pf_last_error_message(void);

/**
 * Static version string.
 */
const char *pf_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void pf_string_free(char *s);

/**
 * # Safety
 * `m` must be NULL or a handle returned by this library, not yet freed.
 */
void pf_matrix_free(struct PfMatrix *m);

/**
 * `L_n` (`kind = PF_KIND_LEFT`) or `R_n` (`kind = PF_KIND_RIGHT`).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PfStatus pf_matrix_pascal(uint32_t kind, size_t n, struct PfMatrix **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PfStatus pf_matrix_identity(size_t n, struct PfMatrix **out);

/**
 * Matrix from `len = n * n` row-major entries.
 *
 * # Safety
 * `entries` must point to `len` readable values; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_from_i64(size_t n,
                                 const int64_t *entries,
                                 size_t len,
                                 struct PfMatrix **out);

/**
 * Parses the JSON matrix document written by `pf_matrix_to_json`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_from_json(const char *json, struct PfMatrix **out);

/**
 * Dimension of `m`, or 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t pf_matrix_dim(const struct PfMatrix *m);

/**
 * Entry `(i, j)` (1-based) as a decimal string.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_entry(const struct PfMatrix *m, size_t i, size_t j, char **out);

/**
 * Entry `(i, j)` (1-based); `PF_STATUS_OVERFLOW` if it does not fit.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_entry_i64(const struct PfMatrix *m, size_t i, size_t j, int64_t *out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_mul(const struct PfMatrix *a,
                            const struct PfMatrix *b,
                            struct PfMatrix **out);

/**
 * `m^e`; negative `e` requires `m` to be unimodular.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_pow(const struct PfMatrix *m, int64_t e, struct PfMatrix **out);

/**
 * `m^e mod p` with entries in `[0, p)`; `p` must be prime.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_pow_mod(const struct PfMatrix *m,
                                int64_t e,
                                uint64_t p,
                                struct PfMatrix **out);

/**
 * Exact inverse of a unimodular matrix.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_inverse(const struct PfMatrix *m, struct PfMatrix **out);

/**
 * Determinant as a decimal string.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_det(const struct PfMatrix *m, char **out);

/**
 * Characteristic polynomial `det(xI - m)` as a JSON array of decimal
 * strings, constant term first.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_charpoly(const struct PfMatrix *m, char **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_equal(const struct PfMatrix *a, const struct PfMatrix *b, bool *out);

/**
 * `{"n": .., "entries": [["1","0"],..]}` with decimal-string entries.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for writes.
 */
enum PfStatus pf_matrix_to_json(const struct PfMatrix *m, char **out);

/**
 * Multiplicative order of the Pascal matrix of `kind` and size `n`
 * modulo the prime `p`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PfStatus pf_order_mod(uint32_t kind, size_t n, uint64_t p, uint64_t *out);

/**
 * Full order report, including the theorem checks, as JSON.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PfStatus pf_order_report_json(uint32_t kind, size_t n, uint64_t p, char **out);

/**
 * `F_k` as a decimal string.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PfStatus pf_fib(uint64_t k, char **out);

/**
 * `L_k` as a decimal string.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PfStatus pf_lucas(uint64_t k, char **out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PfStatus pf_entry_point(uint64_t m, uint64_t *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PfStatus pf_pisano_period(uint64_t m, uint64_t *out);

/**
 * Compares the characteristic polynomial of `R_n` with the product of
 * Lucas-number quadratics.
 *
 * # Safety
 * `out_holds` must be valid for writes.
 */
enum PfStatus pf_check_eigen_conjecture(size_t n, bool *out_holds);

/**
 * Runs a verification campaign described by a JSON config and returns
 * the report rendered in the config's `output_format`. A campaign with
 * failing checks still returns `PF_STATUS_OK`; inspect `out_all_passed`.
 *
 * # Safety
 * `config_json` must be a nul-terminated string; both out-pointers must
 * be valid for writes.
 */
enum PfStatus pf_verify(const char *config_json, char **out_report, bool *out_all_passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PASCALFIB_H */
