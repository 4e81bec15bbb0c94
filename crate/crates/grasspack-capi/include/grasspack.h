#ifndef GRASSPACK_H
#define GRASSPACK_H

/* Generated by cbindgen from grasspack-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. Anything other than `Ok` leaves a
 * human-readable explanation in [`grasspack_last_error_message`].
 */
typedef enum GrasspackStatus {
  GRASSPACK_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  GRASSPACK_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  GRASSPACK_STATUS_INVALID_UTF8 = 2,
  /**
   * An argument was outside the operation's domain.
   */
  GRASSPACK_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Malformed packing or matrix text.
   */
  GRASSPACK_STATUS_PARSE_FAILED = 4,
  /**
   * A generator block drifted too far from orthonormality.
   */
  GRASSPACK_STATUS_NOT_ORTHONORMAL = 5,
  /**
   * Header counts disagree with the file body.
   */
  GRASSPACK_STATUS_COUNT_MISMATCH = 6,
  /**
   * Subspaces disagree on (m, n).
   */
  GRASSPACK_STATUS_DIMENSION_MISMATCH = 7,
  /**
   * Generator rows do not span an n-dimensional subspace.
   */
  GRASSPACK_STATUS_RANK_DEFICIENT = 8,
  /**
   * A pairwise distance fell on or below the potential pole.
   */
  GRASSPACK_STATUS_POLE_CROSSED = 9,
  /**
   * Input fails the conditions of a combinatorial construction.
   */
  GRASSPACK_STATUS_CONSTRUCTION_FAILED = 10,
  /**
   * Operating-system I/O failure.
   */
  GRASSPACK_STATUS_IO_FAILED = 11,
} GrasspackStatus;

/**
 * Metric selector: pass one of these values wherever a `uint32_t metric`
 * parameter appears.
 */
enum GrasspackMetric
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : uint32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  GRASSPACK_METRIC_CHORDAL = 0,
  GRASSPACK_METRIC_GEODESIC = 1,
  GRASSPACK_METRIC_MAX_ANGLE = 2,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum GrasspackMetric GrasspackMetric;
#else
typedef uint32_t GrasspackMetric;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * An immutable packing of N n-dimensional subspaces of R^m (opaque).
 */
typedef struct GrasspackPacking GrasspackPacking;

/**
 * Scorecard of a packing against the simplex and orthoplex bounds on the
 * squared chordal distance.
 */
typedef struct GrasspackBoundReport {
  size_t m;
  size_t n;
  size_t count;
  /**
   * Embedding dimension D = (m-1)(m+2)/2.
   */
  size_t embedding_dim;
  /**
   * Achieved minimal squared chordal distance.
   */
  double achieved_sq;
  double simplex_bound;
  /**
   * Valid only when `has_orthoplex_bound` is true (N > D + 1).
   */
  double orthoplex_bound;
  bool has_orthoplex_bound;
  /**
   * achieved_sq divided by the applicable bound.
   */
  double ratio;
  /**
   * True when the packing attains the applicable bound.
   */
  bool meets;
} GrasspackBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, empty before any.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *grasspack_last_error_message(void);

/**
 * Frees a packing handle. A null handle is a no-op.
 *
 * # Safety
 * `packing` must be null or a pointer obtained from this library that has
 * not been freed before.
 */
void grasspack_packing_free(struct GrasspackPacking *packing);

/**
 * Frees a string returned by this library. A null pointer is a no-op.
 *
 * # Safety
 * `text` must be null or a pointer obtained from this library that has not
 * been freed before.
 */
void grasspack_string_free(char *text);

/**
 * Parses a packing file (header `m n N metric`, then N blocks of n rows of
 * m reals) into a new handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be a valid
 * pointer to a `GrasspackPacking*`.
 */
enum GrasspackStatus grasspack_packing_parse(const char *text, struct GrasspackPacking **out);

/**
 * Serializes a packing to the plain-text format (17 significant digits, so
 * parsing the result reproduces every coordinate bit for bit).
 *
 * # Safety
 * `packing` must be a live handle; `out` must be a valid pointer to a
 * `char*`. The result is freed with [`grasspack_string_free`].
 */
enum GrasspackStatus grasspack_packing_serialize(const struct GrasspackPacking *packing,
                                                 char **out);

/**
 * Builds one of the named packings: "planes70-g84", "planes28-g73",
 * "planes18-g42", "hamming10", or "nordstrom-robinson".
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `out` must be a valid
 * pointer to a `GrasspackPacking*`.
 */
enum GrasspackStatus grasspack_construct(const char *name, struct GrasspackPacking **out);

/**
 * Draws N uniformly random n-planes in R^m from the given seed.
 *
 * # Safety
 * `out` must be a valid pointer to a `GrasspackPacking*`.
 */
enum GrasspackStatus grasspack_packing_random(size_t m,
                                              size_t n,
                                              size_t count,
                                              uint32_t metric,
                                              uint64_t seed,
                                              struct GrasspackPacking **out);

/**
 * Reports the ambient dimension m, subspace dimension n, and plane count N.
 *
 * # Safety
 * `packing` must be a live handle; `m`, `n`, and `count` must be valid
 * pointers.
 */
enum GrasspackStatus grasspack_packing_dims(const struct GrasspackPacking *packing,
                                            size_t *m,
                                            size_t *n,
                                            size_t *count);

/**
 * Copies the orthonormal generator of one plane into `rows`, row-major,
 * n rows of m entries.
 *
 * # Safety
 * `packing` must be a live handle; `rows` must point to at least n * m
 * writable doubles.
 */
enum GrasspackStatus grasspack_packing_generator(const struct GrasspackPacking *packing,
                                                 size_t plane,
                                                 double *rows);

/**
 * Reports the minimal pairwise distance under `metric` (0 chordal,
 * 1 geodesic, 2 max-angle) and which pair attains it.
 *
 * # Safety
 * `packing` must be a live handle; `dist`, `i`, and `j` must be valid
 * pointers.
 */
enum GrasspackStatus grasspack_min_distance(const struct GrasspackPacking *packing,
                                            uint32_t metric,
                                            double *dist,
                                            size_t *i,
                                            size_t *j);

/**
 * Reports the minimal interplane angle (smallest first principal angle over
 * all pairs) in radians.
 *
 * # Safety
 * `packing` must be a live handle; `radians` must be a valid pointer.
 */
enum GrasspackStatus grasspack_min_angle(const struct GrasspackPacking *packing, double *radians);

/**
 * Scores a packing against the simplex and orthoplex bounds.
 *
 * # Safety
 * `packing` must be a live handle; `report` must be a valid pointer.
 */
enum GrasspackStatus grasspack_audit(const struct GrasspackPacking *packing,
                                     struct GrasspackBoundReport *report);

/**
 * Searches for a packing of N n-planes in R^m maximizing the minimal
 * distance under `metric` (0 chordal, 1 geodesic), running `restarts`
 * independent random restarts from the given seed. Writes the best packing
 * and its minimal distance.
 *
 * # Safety
 * `out` and `min_dist` must be valid pointers.
 */
enum GrasspackStatus grasspack_optimize(size_t m,
                                        size_t n,
                                        size_t count,
                                        uint32_t metric,
                                        size_t restarts,
                                        uint64_t seed,
                                        struct GrasspackPacking **out,
                                        double *min_dist);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRASSPACK_H */
