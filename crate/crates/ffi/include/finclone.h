#ifndef FINCLONE_H
#define FINCLONE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum FcStatus {
  FC_STATUS_OK = 0,
  FC_STATUS_NULL_POINTER = 1,
  FC_STATUS_INVALID_INPUT = 2,
  FC_STATUS_MISMATCH = 3,
  FC_STATUS_CAPACITY = 4,
  FC_STATUS_PREMISE = 5,
  FC_STATUS_NOT_CLOSED = 6,
  FC_STATUS_PANIC = 7,
} FcStatus;

/**
 * Which decomposition statement [`fc_verify_theorem`] runs.
 */
typedef enum FcTheorem {
  FC_THEOREM_PARTIAL = 0,
  FC_THEOREM_PARTIAL_WEAK = 1,
  FC_THEOREM_S = 2,
  FC_THEOREM_D2 = 3,
} FcTheorem;

typedef struct FcFunction FcFunction;

typedef struct FcGenerators FcGenerators;

typedef struct FcQSet FcQSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *fc_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or come from this library, and not be freed twice.
 */
void fc_string_free(char *s);

/**
 * Builds a function from its value table (big-endian cell order).
 *
 * # Safety
 * `table` must point to `len` bytes; `out_fn` must be writable.
 */
enum FcStatus fc_function_new(size_t k,
                              size_t arity,
                              const uint8_t *table,
                              size_t len,
                              struct FcFunction **out_fn);

/**
 * # Safety
 * `f` must be null or a live handle from [`fc_function_new`].
 */
void fc_function_free(struct FcFunction *f);

/**
 * A generator set from `count` function handles (copied).
 *
 * # Safety
 * `fns` must point to `count` live handles; `out_gens` must be writable.
 */
enum FcStatus fc_generators_new(size_t k,
                                const struct FcFunction *const *fns,
                                size_t count,
                                struct FcGenerators **out_gens);

/**
 * Generators from a function or function-set JSON document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out_gens` must be writable.
 */
enum FcStatus fc_generators_from_json(const char *json, struct FcGenerators **out_gens);

/**
 * Generators of a built-in catalog entry, named `<k>/<name>`.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out_gens` must be writable.
 */
enum FcStatus fc_generators_catalog(const char *name, struct FcGenerators **out_gens);

/**
 * # Safety
 * `g` must be null or a live generator handle.
 */
void fc_generators_free(struct FcGenerators *g);

/**
 * Number of generators, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live generator handle.
 */
size_t fc_generators_len(const struct FcGenerators *g);

/**
 * `H ⊆ A^m` from `rows` row-major tuples of length `m`.
 *
 * # Safety
 * `data` must point to `rows * m` bytes; `out_h` must be writable.
 */
enum FcStatus fc_qset_new(size_t k,
                          size_t m,
                          const uint8_t *data,
                          size_t rows,
                          struct FcQSet **out_h);

/**
 * # Safety
 * `h` must be null or a live set handle.
 */
void fc_qset_free(struct FcQSet *h);

/**
 * Whether `f` applied row-wise keeps `H` inside itself.
 *
 * # Safety
 * Handles must be live; `result` must be writable.
 */
enum FcStatus fc_preserves(const struct FcFunction *f, const struct FcQSet *h, bool *result);

/**
 * Whether `H` is invariant under the clone generated by `g`.
 *
 * # Safety
 * Handles must be live; `result` must be writable.
 */
enum FcStatus fc_in_inv(const struct FcGenerators *g, const struct FcQSet *h, bool *result);

/**
 * Least arity of a non-projection, searched up to `bound`. When none is
 * found `finite` is false and `arity` is the first arity not examined.
 *
 * # Safety
 * `g` must be live; `arity` and `finite` must be writable.
 */
enum FcStatus fc_min_nonprojection_arity(const struct FcGenerators *g,
                                         size_t bound,
                                         size_t *arity,
                                         bool *finite);

/**
 * The characteristic as JSON with sorted keys.
 *
 * # Safety
 * `g` must be live; `json` must be writable. Free the result with
 * [`fc_string_free`].
 */
enum FcStatus fc_characteristic_json(const struct FcGenerators *g, size_t bound, char **json);

/**
 * Runs a decomposition statement on `H ⊆ A^m`: exhaustively when
 * `samples` is 0, else on `samples` sets drawn from `seed`. Writes the JSON
 * report and whether it found no failure.
 *
 * # Safety
 * `g` must be live; `passed` and `report` must be writable. Free the
 * report with [`fc_string_free`].
 */
enum FcStatus fc_verify_theorem(enum FcTheorem which,
                                const struct FcGenerators *g,
                                size_t m,
                                size_t samples,
                                uint64_t seed,
                                bool *passed,
                                char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINCLONE_H */
