#ifndef TROPJAC_H
#define TROPJAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the nonzero values match the command-line exit codes.
 */
typedef enum TjStatus {
  TJ_STATUS_OK = 0,
  TJ_STATUS_NULL_POINTER = 1,
  TJ_STATUS_PARSE = 2,
  TJ_STATUS_INVARIANT = 3,
  TJ_STATUS_NOT_A_TREE = 4,
  TJ_STATUS_DEGENERATE_DIVISOR = 5,
  TJ_STATUS_OUT_OF_SUPPORTED_RANGE = 6,
  TJ_STATUS_PANIC = 7,
} TjStatus;

/**
 * Opaque PL divisor with its minimal monoid.
 */
typedef struct TjDivisor TjDivisor;

/**
 * Opaque validated graph.
 */
typedef struct TjGraph TjGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null after a
 * success. Valid until the next call into the library on this thread.
 */
const char *tj_last_error(void);

/**
 * Library version as a static string.
 */
const char *tj_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void tj_string_free(char *s);

/**
 * Parses and validates a graph description.
 *
 * # Safety
 * `json` is a nul-terminated string; `out` is valid for writes.
 */
enum TjStatus tj_graph_from_json(const char *json, struct TjGraph **out);

/**
 * # Safety
 * `graph` is null or a handle from [`tj_graph_from_json`] not yet freed.
 */
void tj_graph_free(struct TjGraph *graph);

/**
 * Writes the number of vertices, edges, legs and the genus.
 *
 * # Safety
 * `graph` is a live handle; each out pointer is null or valid for writes.
 */
enum TjStatus tj_graph_stats(const struct TjGraph *graph,
                             size_t *vertices,
                             size_t *edges,
                             size_t *legs,
                             uint32_t *genus);

/**
 * Canonical JSON of the graph.
 *
 * # Safety
 * `graph` is a live handle; `out` is valid for writes.
 */
enum TjStatus tj_graph_to_json(const struct TjGraph *graph, char **out);

/**
 * Builds a divisor from `{"edge-id": slope, …}`.
 *
 * # Safety
 * `graph` is a live handle; `slopes_json` is nul-terminated; `out` is valid
 * for writes.
 */
enum TjStatus tj_divisor_new(const struct TjGraph *graph,
                             const char *slopes_json,
                             struct TjDivisor **out);

/**
 * The tree twist for `target` (`"zero"`, `"canonical"`, or a JSON map from
 * vertex ids to degrees).
 *
 * # Safety
 * `graph` is a live handle; `target` is nul-terminated; `out` is valid for
 * writes.
 */
enum TjStatus tj_tree_twist(const struct TjGraph *graph,
                            const char *target,
                            struct TjDivisor **out);

/**
 * # Safety
 * `d` is null or a divisor handle not yet freed.
 */
void tj_divisor_free(struct TjDivisor *d);

/**
 * Graph, slopes, minimal monoid, values and diagnostics as JSON.
 *
 * # Safety
 * `d` is a live handle; `out` is valid for writes.
 */
enum TjStatus tj_divisor_to_json(const struct TjDivisor *d, char **out);

/**
 * Writes the degree of vertex `index` (graph order).
 *
 * # Safety
 * `d` is a live handle; `out` is valid for writes.
 */
enum TjStatus tj_divisor_degree(const struct TjDivisor *d, size_t index, int64_t *out);

/**
 * Whether the vertex values are totally ordered in the base monoid.
 *
 * # Safety
 * `d` is a live handle; `out` is valid for writes.
 */
enum TjStatus tj_divisor_is_aligned(const struct TjDivisor *d, bool *out);

/**
 * All slope assignments with the target multidegree, as a JSON array.
 *
 * # Safety
 * `graph` is a live handle; `target` is nul-terminated; `out` is valid for
 * writes.
 */
enum TjStatus tj_enumerate_json(const struct TjGraph *graph, const char *target, char **out);

/**
 * Cells of the base-cone subdivision with rubber data and ranks for each
 * maximal cell.
 *
 * # Safety
 * `d` is a live handle; `out` is valid for writes.
 */
enum TjStatus tj_rubber_json(const struct TjDivisor *d, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPJAC_H */
