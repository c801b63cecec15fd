#ifndef QHDIM_H
#define QHDIM_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * How a dimension was obtained.
 */
typedef enum QhDimStatus {
  QH_DIM_STATUS_NON_SPECIAL_PROVED = 0,
  QH_DIM_STATUS_SPECIAL_PROVED = 1,
  QH_DIM_STATUS_CONJECTURAL = 2,
  QH_DIM_STATUS_ORACLE_MEASURED = 3,
} QhDimStatus;

typedef enum QhOutcome {
  QH_OUTCOME_EMPTY_PROVED = 0,
  QH_OUTCOME_NON_SPECIAL_PROVED = 1,
  QH_OUTCOME_INCONCLUSIVE = 2,
} QhOutcome;

/**
 * Error codes.
 */
typedef enum QhStatus {
  QH_STATUS_OK = 0,
  QH_STATUS_NULL_POINTER = 1,
  QH_STATUS_INVALID_ARGUMENT = 2,
  QH_STATUS_BUDGET_EXHAUSTED = 3,
  QH_STATUS_IO = 4,
  QH_STATUS_INDEX_OUT_OF_RANGE = 5,
  QH_STATUS_PANIC = 6,
} QhStatus;

/**
 * Opaque certifier with its memo table.
 */
typedef struct QhCertifier QhCertifier;

/**
 * Opaque list of (-1)-classes.
 */
typedef struct QhClassList QhClassList;

/**
 * `L(d, m0, n, m)`.
 */
typedef struct QhSystem {
  int64_t d;
  int64_t m0;
  int64_t n;
  int64_t m;
} QhSystem;

typedef struct QhInvariants {
  int64_t v;
  int64_t e;
  int64_t self_int;
  int64_t genus;
} QhInvariants;

typedef struct QhDimension {
  int64_t dim;
  int64_t v;
  int64_t e;
  enum QhDimStatus status;
} QhDimension;

typedef struct QhCertificate {
  enum QhOutcome outcome;
  /**
   * Dimension given by the proof tree, or -2 when it gives none. Only a
   * proof when `outcome` is not inconclusive.
   */
  int64_t dim;
  bool oracle_assisted;
} QhCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Valid until the next call
 * into the library from the same thread; do not free.
 */
const char *qhdim_last_error(void);

/**
 * Release a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void qhdim_string_free(char *s);

/**
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_invariants(struct QhSystem l, struct QhInvariants *result);

/**
 * Dimension from the classifier.
 *
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_dimension(struct QhSystem l, struct QhDimension *result);

/**
 * Dimension measured by random specialization modulo `prime`. Pass 0 for
 * `prime` or `trials` to use the defaults.
 *
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_oracle_dim(struct QhSystem l,
                               uint64_t seed,
                               uint32_t trials,
                               uint64_t prime,
                               int64_t *dim);

/**
 * New certifier; `budget` 0 means the default. Free with
 * [`qhdim_certifier_free`].
 *
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_certifier_new(uint64_t budget, struct QhCertifier **handle);

/**
 * # Safety
 * `handle` must come from [`qhdim_certifier_new`] and not have been freed.
 */
void qhdim_certifier_free(struct QhCertifier *handle);

/**
 * Certify `l`. If `trace` is not null it receives the proof tree as text,
 * to be released with [`qhdim_string_free`].
 *
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_certify(const struct QhCertifier *handle,
                            struct QhSystem l,
                            struct QhCertificate *result,
                            char **trace);

/**
 * Load a certificate cache. `loaded` (optional) receives the entry count.
 *
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_certifier_load(const struct QhCertifier *handle,
                                   const char *path,
                                   uint64_t *loaded);

/**
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_certifier_save(const struct QhCertifier *handle, const char *path);

/**
 * Quasi-homogeneous (-1)-classes with `m <= m_max`, the pencil of lines
 * through `p0` listed up to `e_max`. Free with [`qhdim_class_list_free`].
 *
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_class_list_new(int64_t m_max, int64_t e_max, struct QhClassList **handle);

/**
 * # Safety
 * `handle` must come from [`qhdim_class_list_new`] and not have been freed.
 */
void qhdim_class_list_free(struct QhClassList *handle);

/**
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_class_list_len(const struct QhClassList *handle, uint64_t *len);

/**
 * # Safety
 * Pointer arguments must be null or valid for the access they describe;
 * handles must be live.
 */
enum QhStatus qhdim_class_list_get(const struct QhClassList *handle,
                                   uint64_t index,
                                   struct QhSystem *class_);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHDIM_H */
