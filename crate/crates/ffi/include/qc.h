#ifndef QC_H
#define QC_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_UTF8 = 2,
  QC_STATUS_PARSE = 3,
  QC_STATUS_INVALID_ARGUMENT = 4,
  QC_STATUS_NOT_AUTOMORPHISM = 5,
  QC_STATUS_CONSTRAINT_VIOLATION = 6,
  QC_STATUS_GROUP_MISMATCH = 7,
  QC_STATUS_UNCLASSIFIABLE = 8,
  QC_STATUS_INTERNAL = 9,
  QC_STATUS_PANIC = 10,
} QcStatus;

/**
 * A linear endomorphism of the algebra.
 */
typedef struct QcEndo QcEndo;

/**
 * Factor coordinates `(r1, r2, psi, sigma)` of an automorphism.
 */
typedef struct QcFactors QcFactors;

/**
 * A grading of the algebra.
 */
typedef struct QcGrading QcGrading;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qc_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void qc_string_free(char *s);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qc_version(void);

/**
 * Parses a grading document.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum QcStatus qc_grading_from_json(const char *json, struct QcGrading **out);

/**
 * Builds a family member. `params_json` is a JSON array of parameters in
 * the family's order: group elements as integer arrays, scalars as arrays
 * of four rational strings.
 *
 * # Safety
 * All strings must be NUL-terminated; `out` must be writable.
 */
enum QcStatus qc_grading_make(const char *family,
                              const char *group,
                              const char *params_json,
                              struct QcGrading **out);

/**
 * The standard quartic grading for `which == 0`, otherwise the
 * structurable grading with even part `K + K x_which` for `which` in 1..=3.
 *
 * # Safety
 * `out` must be writable.
 */
enum QcStatus qc_grading_standard(uint32_t which, struct QcGrading **out);

/**
 * Serializes a grading; free the result with [`qc_string_free`].
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_grading_to_json(const struct QcGrading *g, char **out);

/**
 * Writes whether the decomposition is a grading.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_grading_validate(const struct QcGrading *g, bool *out);

/**
 * Classifies a grading; the result is a classification JSON document.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_grading_classify(const struct QcGrading *g, char **out);

/**
 * Searches for an automorphism mapping `a` onto `b` degree by degree.
 * Writes NULL when none exists.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum QcStatus qc_grading_isomorphism(const struct QcGrading *a,
                                     const struct QcGrading *b,
                                     struct QcFactors **out);

/**
 * Image of a grading under an automorphism.
 *
 * # Safety
 * `g`, `f` must be live handles; `out` must be writable.
 */
enum QcStatus qc_grading_apply(const struct QcGrading *g,
                               const struct QcFactors *f,
                               struct QcGrading **out);

/**
 * # Safety
 * `g` must be NULL or a handle not yet freed.
 */
void qc_grading_free(struct QcGrading *g);

/**
 * Parses an 8x8 matrix document.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum QcStatus qc_endo_from_json(const char *json, struct QcEndo **out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_endo_to_json(const struct QcEndo *m, char **out);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_endo_is_automorphism(const struct QcEndo *m, bool *out);

/**
 * Factors an automorphism; fails with `NotAutomorphism` otherwise.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_endo_factor(const struct QcEndo *m, struct QcFactors **out);

/**
 * # Safety
 * `m` must be NULL or a handle not yet freed.
 */
void qc_endo_free(struct QcEndo *m);

/**
 * Parses a factor document; `r1` and `r2` must have norm one.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
enum QcStatus qc_factors_from_json(const char *json, struct QcFactors **out);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_factors_to_json(const struct QcFactors *f, char **out);

/**
 * The matrix of the automorphism with the given factors.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_factors_realize(const struct QcFactors *f, struct QcEndo **out);

/**
 * Factors of `realize(a) ∘ realize(b)`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
enum QcStatus qc_factors_compose(const struct QcFactors *a,
                                 const struct QcFactors *b,
                                 struct QcFactors **out);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum QcStatus qc_factors_inverse(const struct QcFactors *f, struct QcFactors **out);

/**
 * # Safety
 * `f` must be NULL or a handle not yet freed.
 */
void qc_factors_free(struct QcFactors *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QC_H */
