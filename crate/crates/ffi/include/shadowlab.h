#ifndef SHADOWLAB_H
#define SHADOWLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShadowlabStatus {
  SHADOWLAB_STATUS_OK = 0,
  SHADOWLAB_STATUS_NULL_POINTER = 1,
  SHADOWLAB_STATUS_INVALID_UTF8 = 2,
  SHADOWLAB_STATUS_PARSE = 3,
  SHADOWLAB_STATUS_VALIDATION = 4,
  SHADOWLAB_STATUS_BUDGET = 5,
  SHADOWLAB_STATUS_PANIC = 6,
} ShadowlabStatus;

typedef enum ShadowlabClassification {
  SHADOWLAB_CLASSIFICATION_EMPTY = 0,
  SHADOWLAB_CLASSIFICATION_POINT = 1,
  SHADOWLAB_CLASSIFICATION_PATH = 2,
  SHADOWLAB_CLASSIFICATION_CYCLE = 3,
  SHADOWLAB_CLASSIFICATION_TREE = 4,
  SHADOWLAB_CLASSIFICATION_OTHER = 5,
} ShadowlabClassification;

typedef enum ShadowlabSearchMode {
  SHADOWLAB_SEARCH_MODE_PATH_SHADOW_CYCLES = 0,
  SHADOWLAB_SEARCH_MODE_CONVEX_SHADOW_PATHS = 1,
  SHADOWLAB_SEARCH_MODE_MIN_VERTEX_PATHS = 2,
  SHADOWLAB_SEARCH_MODE_BRANCH_CENSUS = 3,
} ShadowlabSearchMode;

// Opaque simple polygonal curve.
typedef struct ShadowlabCurve ShadowlabCurve;

// Opaque voxel set.
typedef struct ShadowlabVoxels ShadowlabVoxels;

// Topology of one shadow.
typedef struct ShadowlabTopology {
  enum ShadowlabClassification classification;
  size_t component_count;
  size_t vertex_count;
  size_t edge_count;
  size_t branch_point_count;
  bool has_cycle;
} ShadowlabTopology;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Free it with
// `shadowlab_string_free`.
char *shadowlab_last_error(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void shadowlab_string_free(char *s);

// Parses curve-file text.
//
// # Safety
// `text` must be a nul-terminated string; `curve` must be writable.
enum ShadowlabStatus shadowlab_curve_parse(const char *text, struct ShadowlabCurve **curve);

// # Safety
// `curve` must come from `shadowlab_curve_parse` or be NULL.
void shadowlab_curve_free(struct ShadowlabCurve *curve);

// # Safety
// Pointers must be valid.
enum ShadowlabStatus shadowlab_curve_dim(const struct ShadowlabCurve *curve, size_t *dim);

// Topology of the x_axis shadow of a spatial curve.
//
// # Safety
// Pointers must be valid.
enum ShadowlabStatus shadowlab_curve_classify(const struct ShadowlabCurve *curve,
                                              size_t axis,
                                              struct ShadowlabTopology *report);

// The x_axis-strands of the curve as a JSON array.
//
// # Safety
// Pointers must be valid.
enum ShadowlabStatus shadowlab_curve_strands_json(const struct ShadowlabCurve *curve,
                                                  size_t axis,
                                                  char **json);

// Runs a seeded or exhaustive search and returns its JSON report. `n` is
// the vertex count for `MinVertexPaths` and ignored otherwise.
//
// # Safety
// `json` must be writable.
enum ShadowlabStatus shadowlab_search_json(enum ShadowlabSearchMode mode,
                                           int64_t grid_max,
                                           size_t max_length,
                                           uint64_t samples,
                                           uint64_t seed,
                                           size_t n,
                                           char **json);

// Voxelized S_{d+1} over the shipped tree-shadow base cycle.
//
// # Safety
// `voxels` must be writable.
enum ShadowlabStatus shadowlab_sphere_build(size_t d,
                                            uint32_t resolution,
                                            struct ShadowlabVoxels **voxels);

// Parses voxel-file text.
//
// # Safety
// `text` must be a nul-terminated string; `voxels` must be writable.
enum ShadowlabStatus shadowlab_voxels_parse(const char *text, struct ShadowlabVoxels **voxels);

// # Safety
// `voxels` must come from this library or be NULL.
void shadowlab_voxels_free(struct ShadowlabVoxels *voxels);

// # Safety
// Pointers must be valid.
enum ShadowlabStatus shadowlab_voxels_len(const struct ShadowlabVoxels *voxels, size_t *len);

// # Safety
// Pointers must be valid.
enum ShadowlabStatus shadowlab_voxels_dim(const struct ShadowlabVoxels *voxels, size_t *dim);

// New handle holding the x_axis shadow.
//
// # Safety
// Pointers must be valid.
enum ShadowlabStatus shadowlab_voxels_shadow(const struct ShadowlabVoxels *voxels,
                                             size_t axis,
                                             struct ShadowlabVoxels **shadow);

// Writes up to `capacity` Betti numbers (b_0 first) into `betti` and their
// count into `count`.
//
// # Safety
// `betti` must have room for `capacity` values; other pointers valid.
enum ShadowlabStatus shadowlab_voxels_betti(const struct ShadowlabVoxels *voxels,
                                            size_t *betti,
                                            size_t capacity,
                                            size_t *count);

// Largest voxel set compatible with three bitmap texts, as JSON.
//
// # Safety
// Inputs must be nul-terminated strings; `json` must be writable.
enum ShadowlabStatus shadowlab_compat_largest_json(const char *s1,
                                                   const char *s2,
                                                   const char *s3,
                                                   char **json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHADOWLAB_H */
