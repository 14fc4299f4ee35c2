#ifndef SOCIOGRAM_H
#define SOCIOGRAM_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER,
  SG_STATUS_INVALID_UTF8,
  SG_STATUS_IO,
  SG_STATUS_FORMAT,
  SG_STATUS_UNKNOWN_VERTEX,
  SG_STATUS_UNDEFINED_METRIC,
  SG_STATUS_CONTRACT,
  SG_STATUS_SINGULAR_FIT,
  SG_STATUS_CONFIG,
  SG_STATUS_BUFFER_TOO_SMALL,
  SG_STATUS_PANIC,
} SgStatus;

typedef enum SgDedup {
  SG_DEDUP_KEEP_ALL = 0,
  SG_DEDUP_COLLAPSE_PAIRS = 1,
} SgDedup;

typedef enum SgArchetype {
  SG_ARCHETYPE_UNIFIED = 0,
  SG_ARCHETYPE_IN_HUB,
  SG_ARCHETYPE_OUT_HUB,
  SG_ARCHETYPE_MULTI_TOPIC,
  SG_ARCHETYPE_POLARIZED,
  SG_ARCHETYPE_FRAGMENTED,
} SgArchetype;

/**
 * Why an `SgMetric` has no value; `SG_UNDEFINED_DEFINED` when it has one.
 */
typedef enum SgUndefined {
  SG_UNDEFINED_DEFINED = 0,
  SG_UNDEFINED_EMPTY_GRAPH,
  SG_UNDEFINED_TOO_FEW_VERTICES,
  SG_UNDEFINED_NO_EDGES,
  SG_UNDEFINED_NO_REACHABLE_PAIRS,
  SG_UNDEFINED_ZERO_DENOMINATOR,
  SG_UNDEFINED_ZERO_NUMERATOR,
  SG_UNDEFINED_INFINITE_ASYMMETRY,
  SG_UNDEFINED_EMPTY_CORPUS,
  SG_UNDEFINED_ZERO_VARIANCE,
  SG_UNDEFINED_TOO_FEW_POINTS,
  SG_UNDEFINED_STAGE_SKIPPED,
} SgUndefined;

typedef enum SgFitModel {
  SG_FIT_MODEL_POWER_LAW = 0,
  SG_FIT_MODEL_STRETCHED_POWER_LAW,
  SG_FIT_MODEL_EXPONENTIAL,
} SgFitModel;

/**
 * Opaque graph handle.
 */
typedef struct SgGraph SgGraph;

/**
 * A value that may be undefined. `value` is NaN unless `reason` is
 * `SG_UNDEFINED_DEFINED`.
 */
typedef struct SgMetric {
  double value;
  enum SgUndefined reason;
} SgMetric;

typedef struct SgGraphStats {
  struct SgMetric c_global;
  struct SgMetric rho;
  struct SgMetric diameter;
  struct SgMetric d_avg;
  uint64_t max_edges;
  struct SgMetric r_vertex;
  struct SgMetric n_in;
  struct SgMetric n_out;
} SgGraphStats;

typedef struct SgArchetypeLabel {
  enum SgArchetype kind;
  double confidence;
} SgArchetypeLabel;

typedef struct SgFitResult {
  enum SgFitModel model;
  double scale;
  double exponent;
  double r_squared;
  size_t n_points;
  bool flat;
} SgFitResult;

typedef struct SgLayoutParams {
  double repulsion;
  size_t iterations;
  uint64_t seed;
  double width;
  double height;
} SgLayoutParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sg_version(void);

/**
 * Copy of the calling thread's last error message, or NULL when there is
 * none. Release it with `sg_string_free`.
 */
char *sg_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void sg_string_free(char *s);

/**
 * Reads an edge CSV from `path`. Rows that fail to parse are skipped.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SgStatus sg_graph_from_csv_path(const char *path,
                                     enum SgDedup dedup_mode,
                                     struct SgGraph **out);

/**
 * Parses an edge CSV held in memory.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum SgStatus sg_graph_from_csv_buffer(const uint8_t *data,
                                       size_t len,
                                       enum SgDedup dedup_mode,
                                       struct SgGraph **out);

/**
 * Seeded synthetic graph of the given archetype (`size` >= 5).
 *
 * # Safety
 * `out` must be writable.
 */
enum SgStatus sg_graph_generate(enum SgArchetype kind,
                                size_t size,
                                uint64_t seed,
                                struct SgGraph **out);

/**
 * # Safety
 * `g` must be NULL or a handle from this library not yet freed.
 */
void sg_graph_free(struct SgGraph *g);

/**
 * # Safety
 * `g` must be NULL or a live handle. Returns 0 for NULL.
 */
size_t sg_graph_vertex_count(const struct SgGraph *g);

/**
 * Edges read, duplicates included.
 *
 * # Safety
 * `g` must be NULL or a live handle. Returns 0 for NULL.
 */
size_t sg_graph_edge_count(const struct SgGraph *g);

/**
 * Distinct ordered (source, target) pairs.
 *
 * # Safety
 * `g` must be NULL or a live handle. Returns 0 for NULL.
 */
size_t sg_graph_unique_edge_count(const struct SgGraph *g);

/**
 * Copies the id of vertex `v` into `buf` with a trailing NUL. `needed`
 * (if not NULL) receives the required size including the NUL, also when
 * the buffer is too small.
 *
 * # Safety
 * `g` must be a live handle; `buf` must hold `cap` bytes.
 */
enum SgStatus sg_graph_vertex_name(const struct SgGraph *g,
                                   size_t v,
                                   char *buf,
                                   size_t cap,
                                   size_t *needed);

/**
 * Clustering, density, geodesics and vertex asymmetry in one call.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_graph_stats(const struct SgGraph *g, struct SgGraphStats *out);

/**
 * Raw betweenness per vertex; the undirected view unless `directed`.
 *
 * # Safety
 * `g` must be a live handle; `out` must hold `len` doubles.
 */
enum SgStatus sg_betweenness(const struct SgGraph *g, bool directed, double *out, size_t len);

/**
 * PageRank with the given damping and default tolerance.
 *
 * # Safety
 * `g` must be a live handle; `out` must hold `len` doubles; `converged`
 * may be NULL.
 */
enum SgStatus sg_pagerank(const struct SgGraph *g,
                          double damping,
                          double *out,
                          size_t len,
                          bool *converged);

/**
 * Max-normalized eigenvector centrality of the undirected view.
 *
 * # Safety
 * `g` must be a live handle; `out` must hold `len` doubles; `converged`
 * may be NULL.
 */
enum SgStatus sg_eigenvector(const struct SgGraph *g, double *out, size_t len, bool *converged);

/**
 * Greedy modularity grouping: block index per vertex (block 0 is the
 * largest) and the partition's modularity.
 *
 * # Safety
 * `g` must be a live handle; `labels` must hold `len` values;
 * `modularity` may be NULL.
 */
enum SgStatus sg_cnm_labels(const struct SgGraph *g,
                            size_t *labels,
                            size_t len,
                            struct SgMetric *modularity);

/**
 * Archetype of the whole graph under the default thresholds.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum SgStatus sg_classify(const struct SgGraph *g, struct SgArchetypeLabel *out);

/**
 * Log-space least-squares fit of `n` points.
 *
 * # Safety
 * `xs` and `ys` must hold `n` doubles; `out` must be writable.
 */
enum SgStatus sg_fit(enum SgFitModel model,
                     const double *xs,
                     const double *ys,
                     size_t n,
                     struct SgFitResult *out);

/**
 * `log10(n_in / n_out)`.
 */
struct SgMetric sg_asymmetry_strength(uint64_t n_in, uint64_t n_out);

/**
 * `log10(numerator / denominator)` of two lexicon score fractions.
 */
struct SgMetric sg_sentiment_ratio(double numerator, double denominator);

/**
 * Default layout parameters.
 */
struct SgLayoutParams sg_layout_params_default(void);

/**
 * Seeded force-directed layout; coordinates go to `xs` and `ys`.
 *
 * # Safety
 * `g` must be a live handle; `params` readable; `xs`/`ys` must hold `len`
 * doubles each.
 */
enum SgStatus sg_layout(const struct SgGraph *g,
                        const struct SgLayoutParams *params,
                        double *xs,
                        double *ys,
                        size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOCIOGRAM_H */
