#ifndef LSTREE_H
#define LSTREE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LstFormat {
  LST_FORMAT_EDGES = 0,
  LST_FORMAT_DIMACS = 1,
} LstFormat;

typedef enum LstMode {
  LST_MODE_DEMO = 0,
  LST_MODE_PAPER = 1,
} LstMode;

typedef enum LstSchedule {
  LST_SCHEDULE_BASIC = 0,
  LST_SCHEDULE_ITERATED = 1,
  LST_SCHEDULE_FIXED = 2,
} LstSchedule;

typedef enum LstStatus {
  LST_STATUS_OK = 0,
  LST_STATUS_NULL_POINTER = 1,
  LST_STATUS_INVALID_ARGUMENT = 2,
  LST_STATUS_PRECONDITION = 3,
  LST_STATUS_DISCONNECTED = 4,
  LST_STATUS_PARSE = 5,
  LST_STATUS_PARAMS = 6,
  LST_STATUS_DOMAIN = 7,
  LST_STATUS_IO = 8,
  LST_STATUS_INTERNAL = 9,
  LST_STATUS_PANIC = 10,
} LstStatus;

/**
 * Opaque graph handle.
 */
typedef struct LstGraph LstGraph;

/**
 * Opaque spanning-tree handle.
 */
typedef struct LstTree LstTree;

/**
 * Build parameters. Enum-valued fields hold `LstMode` / `LstSchedule`
 * values; anything else is rejected.
 */
typedef struct LstParams {
  double c;
  double eps;
  double base_radius;
  double contraction;
  uint64_t seed;
  uint32_t mode;
  uint32_t schedule;
  /**
   * Depth of the iterated schedule.
   */
  uint32_t t;
  bool shuffle;
  bool random_root;
} LstParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until
 * the next failing call on the same thread.
 */
const char *lst_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lst_version(void);

/**
 * An edgeless graph on `n` vertices.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum LstStatus lst_graph_new(size_t n, struct LstGraph **out);

/**
 * Adds edge `{u, v}` of length `len`.
 *
 * # Safety
 * `g` must be a live handle from this library.
 */
enum LstStatus lst_graph_add_edge(struct LstGraph *g, size_t u, size_t v, double len);

/**
 * Parses a NUL-terminated graph text. Vertex labels are remapped to
 * `0..n` in ascending order (DIMACS ids become `id - 1`).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for a write.
 */
enum LstStatus lst_graph_parse(const char *text, uint32_t format, struct LstGraph **out);

/**
 * # Safety
 * `g` must be NULL or a live handle; it is dead afterwards.
 */
void lst_graph_free(struct LstGraph *g);

/**
 * # Safety
 * `g` must be NULL or a live handle. NULL gives 0.
 */
size_t lst_graph_vertex_count(const struct LstGraph *g);

/**
 * # Safety
 * `g` must be NULL or a live handle. NULL gives 0.
 */
size_t lst_graph_edge_count(const struct LstGraph *g);

/**
 * Demo parameters: c = 2, fixed eps = 1/2, base radius 1, seed 0.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum LstStatus lst_params_default(struct LstParams *out);

/**
 * Builds a low-stretch spanning tree of a connected graph. A negative
 * `root` selects the default root.
 *
 * # Safety
 * `g` and `params` must be live, `out` valid for a write.
 */
enum LstStatus lst_build_tree(const struct LstGraph *g,
                              const struct LstParams *params,
                              int64_t root,
                              struct LstTree **out);

/**
 * # Safety
 * `t` must be NULL or a live handle; it is dead afterwards.
 */
void lst_tree_free(struct LstTree *t);

/**
 * # Safety
 * `t` must be NULL or a live handle. NULL gives 0.
 */
size_t lst_tree_edge_count(const struct LstTree *t);

/**
 * # Safety
 * `t` must be live and `out` valid for a write.
 */
enum LstStatus lst_tree_root(const struct LstTree *t, size_t *out);

/**
 * Copies the tree edges, `u < v` in ascending order, into three arrays of
 * capacity `cap`. Fails without writing if `cap` is too small.
 *
 * # Safety
 * Each array must be valid for `cap` writes.
 */
enum LstStatus lst_tree_edges(const struct LstTree *t,
                              size_t *us,
                              size_t *vs,
                              double *lens,
                              size_t cap);

/**
 * Tree distance between `u` and `v`.
 *
 * # Safety
 * `t` must be live and `out` valid for a write.
 */
enum LstStatus lst_tree_distance(const struct LstTree *t, size_t u, size_t v, double *out);

/**
 * Average and maximum stretch of `t` over the edges of `g`.
 *
 * # Safety
 * `g`, `t` must be live; `avg`, `max` valid for writes.
 */
enum LstStatus lst_stretch(const struct LstGraph *g,
                           const struct LstTree *t,
                           double *avg,
                           double *max);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSTREE_H */
