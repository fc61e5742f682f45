#ifndef COLORMATCH_H
#define COLORMATCH_H

/* Generated by cbindgen from the Rust sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define CM_OK 0

/**
 * I/O failure.
 */
#define CM_ERR_IO 1

/**
 * Invalid argument, parse failure, or internal consistency violation.
 */
#define CM_ERR_ARGUMENT 2

/**
 * Parameters leave the model's domain (e.g. an edge probability above 1).
 */
#define CM_ERR_MODEL_DOMAIN 3

/**
 * Structured experiment failure (e.g. a recoloring walk dead-ended).
 */
#define CM_ERR_EXPERIMENT 4

/**
 * An internal panic was caught at the boundary.
 */
#define CM_ERR_PANIC 5

/**
 * A randomly colored bipartite graph (opaque).
 */
typedef struct CmGraph CmGraph;

/**
 * A (partial or perfect) matching (opaque).
 */
typedef struct CmMatching CmMatching;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Empty if the last
 * call succeeded. The pointer stays valid until the next library call on
 * the same thread; copy the string if it must outlive that.
 */
const char *cm_last_error(void);

/**
 * Sample a graph on `n + n` vertices: each of the `n²` possible edges is
 * kept with probability `p` and colored by the law `alphas[0..q]`
 * (positive weights summing to 1). Identical `(n, p, alphas, seed)` give
 * identical graphs on every platform.
 *
 * # Safety
 * `alphas` must point to `q` readable doubles; `out` must be valid for a
 * pointer write.
 */
int cm_graph_generate(size_t n,
                      double p,
                      const double *alphas,
                      size_t q,
                      uint64_t seed,
                      struct CmGraph **out);

/**
 * Parse a graph from its text form (`n q` header, then 1-based
 * `a b color` lines; `#` starts a comment).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be valid for a
 * pointer write.
 */
int cm_graph_from_text(const char *text, struct CmGraph **out);

/**
 * Render the graph's canonical text form. Free the string with
 * [`cm_string_free`].
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be valid for a pointer write.
 */
int cm_graph_to_text(const struct CmGraph *g, char **out);

/**
 * Vertices per side; `0` for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t cm_graph_n(const struct CmGraph *g);

/**
 * Number of colors; `0` for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t cm_graph_q(const struct CmGraph *g);

/**
 * Number of edges; `0` for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t cm_graph_edge_count(const struct CmGraph *g);

/**
 * Release a graph handle. Null is a no-op.
 *
 * # Safety
 * `g` must be null or an owned graph handle not used afterwards.
 */
void cm_graph_free(struct CmGraph *g);

/**
 * Compute a maximum matching (deterministic for a given graph).
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be valid for a pointer write.
 */
int cm_maximum_matching(const struct CmGraph *g, struct CmMatching **out);

/**
 * Number of matched pairs; `0` for a null handle.
 *
 * # Safety
 * `m` must be null or a live matching handle.
 */
size_t cm_matching_size(const struct CmMatching *m);

/**
 * Whether every vertex is matched; `false` for a null handle.
 *
 * # Safety
 * `m` must be null or a live matching handle.
 */
bool cm_matching_is_perfect(const struct CmMatching *m);

/**
 * Render the matching's text form (1-based `a b` lines). Free the string
 * with [`cm_string_free`].
 *
 * # Safety
 * `m` must be a live matching handle; `out` must be valid for a pointer
 * write.
 */
int cm_matching_to_text(const struct CmMatching *m, char **out);

/**
 * Release a matching handle. Null is a no-op.
 *
 * # Safety
 * `m` must be null or an owned matching handle not used afterwards.
 */
void cm_matching_free(struct CmMatching *m);

/**
 * Per-color edge counts of a perfect matching of `g`, written to
 * `out_counts[0..q]`.
 *
 * # Safety
 * `g` and `m` must be live handles; `out_counts` must be valid for
 * `cm_graph_q(g)` writes.
 */
int cm_profile(const struct CmGraph *g, const struct CmMatching *m, size_t *out_counts);

/**
 * Enumerate every color profile realized by some perfect matching, as a
 * JSON array of `q`-vectors in lexicographic order (e.g. `[[0,2],[2,0]]`).
 * Exact but exponential: graphs above the library's size cap are rejected.
 * Free the string with [`cm_string_free`].
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be valid for a pointer write.
 */
int cm_mcp_json(const struct CmGraph *g, char **out);

/**
 * Walk the perfect matching `m` toward the target profile
 * `target[0..q]` by alternating-cycle swaps. On success writes the final
 * matching to `out`. A dead end returns `CM_ERR_EXPERIMENT` (with the
 * reached profile in the error message) and writes nothing.
 *
 * # Safety
 * `g` and `m` must be live handles; `target` must point to `q` readable
 * values; `out` must be valid for a pointer write.
 */
int cm_recolor_to_target(const struct CmGraph *g,
                         const struct CmMatching *m,
                         const size_t *target,
                         size_t q,
                         struct CmMatching **out);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string obtained from this library, not used
 * afterwards.
 */
void cm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLORMATCH_H */
