#ifndef CURVSCAPE_H
#define CURVSCAPE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum CsCurvature {
  CS_CURVATURE_FRC = 0,
  CS_CURVATURE_ORC = 1,
  CS_CURVATURE_REC = 2,
} CsCurvature;

typedef enum CsMeasure {
  CS_MEASURE_UNIFORM = 0,
  CS_MEASURE_RANDOM_WALK = 1,
} CsMeasure;

typedef enum CsNorm {
  CS_NORM_L1 = 0,
  CS_NORM_L2 = 1,
  CS_NORM_SUP = 2,
} CsNorm;

typedef enum CsDistanceMode {
  CS_DISTANCE_MODE_NORM_OF_DIFF = 0,
  CS_DISTANCE_MODE_ALG2 = 1,
} CsDistanceMode;

// Result code of every fallible call.
typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_NULL_POINTER = 1,
  CS_STATUS_INVALID_ARGUMENT = 2,
  // Malformed or unreadable input.
  CS_STATUS_INPUT = 3,
  // Parameters outside their domain.
  CS_STATUS_DOMAIN = 4,
  // The computation failed, e.g. a disconnected pair.
  CS_STATUS_COMPUTATION = 5,
  // A Rust panic was caught at the boundary.
  CS_STATUS_PANIC = 6,
} CsStatus;

// Dimension 0 and 1 persistence pairs.
typedef struct CsDiagram CsDiagram;

// Curvature values indexed by edge, sorted by `(u, v)`.
typedef struct CsEdgeFunction CsEdgeFunction;

// A simple undirected graph.
typedef struct CsGraph CsGraph;

// An ordered collection of graphs.
typedef struct CsGraphSet CsGraphSet;

// Pipeline options. `cap_padding <= 0` selects the automatic padding.
typedef struct CsPipelineConfig {
  enum CsCurvature kind;
  enum CsMeasure measure;
  size_t rw_steps;
  double self_mass;
  size_t resolution;
  double cap_padding;
  enum CsNorm norm;
  enum CsDistanceMode mode;
  size_t max_depth;
} CsPipelineConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *cs_version(void);

// Message of the last failure on this thread; empty if none. The pointer
// stays valid until the next failing call on the same thread.
const char *cs_last_error(void);

// Default pipeline: ORC with the uniform measure, 1000 grid points, automatic
// padding, sup norm, norm of the difference, depth 64.
struct CsPipelineConfig cs_pipeline_config_default(void);

// Builds a graph on `n` vertices from `m` edges given as `2m` endpoints.
//
// # Safety
// `endpoints` must point to `2 * m` readable values (it may be null when
// `m == 0`); `out` must be valid for writes.
enum CsStatus cs_graph_new(size_t n, const size_t *endpoints, size_t m, struct CsGraph **out);

// Reads a graph from an edge-list or single-graph JSON file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be valid for writes.
enum CsStatus cs_graph_read(const char *path, struct CsGraph **out);

// One of the built-in graphs (`k3`, `rook4x4`, `shrikhande`, ...).
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be valid for writes.
enum CsStatus cs_graph_named(const char *name, struct CsGraph **out);

// # Safety
// `g` must be a live graph handle or null.
size_t cs_graph_vertex_count(const struct CsGraph *g);

// # Safety
// `g` must be a live graph handle or null.
size_t cs_graph_edge_count(const struct CsGraph *g);

// # Safety
// `g` must be null or a handle not yet freed.
void cs_graph_free(struct CsGraph *g);

// An empty graph set.
struct CsGraphSet *cs_graph_set_new(void);

// Loads a graph set from a directory, a JSON-lines file or a single graph file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be valid for writes.
enum CsStatus cs_graph_set_read(const char *path, struct CsGraphSet **out);

// Appends a copy of `g`; the caller keeps ownership of `g`.
//
// # Safety
// Both handles must be live.
enum CsStatus cs_graph_set_push(struct CsGraphSet *set, const struct CsGraph *g);

// # Safety
// `set` must be a live set handle or null.
size_t cs_graph_set_len(const struct CsGraphSet *set);

// # Safety
// `set` must be null or a handle not yet freed.
void cs_graph_set_free(struct CsGraphSet *set);

// Edge curvature of `g`. Only the measure fields of `cfg` matter for ORC.
//
// # Safety
// `g` and `cfg` must be live; `out` must be valid for writes.
enum CsStatus cs_curvature(const struct CsGraph *g,
                           const struct CsPipelineConfig *cfg,
                           struct CsEdgeFunction **out);

// # Safety
// `f` must be a live handle or null.
size_t cs_edge_function_len(const struct CsEdgeFunction *f);

// The `i`-th entry in `(u, v)` order.
//
// # Safety
// `f` must be live; the output pointers must be valid for writes.
enum CsStatus cs_edge_function_get(const struct CsEdgeFunction *f,
                                   size_t i,
                                   size_t *u,
                                   size_t *v,
                                   double *value);

// # Safety
// `f` must be null or a handle not yet freed.
void cs_edge_function_free(struct CsEdgeFunction *f);

// Persistence diagram of the sublevel filtration of `f` on `g`.
//
// # Safety
// `g` and `f` must be live; `out` must be valid for writes.
enum CsStatus cs_diagram(const struct CsGraph *g,
                         const struct CsEdgeFunction *f,
                         struct CsDiagram **out);

// Number of pairs in dimension `dim` (0 or 1); 0 for other dimensions.
//
// # Safety
// `d` must be a live handle or null.
size_t cs_diagram_len(const struct CsDiagram *d, size_t dim);

// The `i`-th pair of dimension `dim`; essential classes die at `INFINITY`.
//
// # Safety
// `d` must be live; the output pointers must be valid for writes.
enum CsStatus cs_diagram_pair(const struct CsDiagram *d,
                              size_t dim,
                              size_t i,
                              double *birth,
                              double *death);

// Bottleneck distance over both dimensions; `INFINITY` when the numbers of
// essential classes differ.
//
// # Safety
// `a` and `b` must be live; `out` must be valid for writes.
enum CsStatus cs_bottleneck(const struct CsDiagram *a, const struct CsDiagram *b, double *out);

// # Safety
// `d` must be null or a handle not yet freed.
void cs_diagram_free(struct CsDiagram *d);

// Distance between the average landscapes of two graph sets.
//
// # Safety
// All handles must be live; `out` must be valid for writes.
enum CsStatus cs_set_distance(const struct CsGraphSet *a,
                              const struct CsGraphSet *b,
                              const struct CsPipelineConfig *cfg,
                              double *out);

// Two-sample permutation test; writes the observed distance and the share
// of permutations with a strictly larger distance.
//
// # Safety
// All handles must be live; the output pointers must be valid for writes.
enum CsStatus cs_permutation_test(const struct CsGraphSet *a,
                                  const struct CsGraphSet *b,
                                  const struct CsPipelineConfig *cfg,
                                  size_t permutations,
                                  uint64_t seed,
                                  double *observed,
                                  double *fraction_higher);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CURVSCAPE_H */
