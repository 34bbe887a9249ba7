#ifndef PLANAR_DIAMETER_H
#define PLANAR_DIAMETER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. `PD_STATUS_OK` is zero.
typedef enum PdStatus {
  PD_STATUS_OK = 0,
  PD_STATUS_NULL_POINTER = 1,
  PD_STATUS_INVALID_UTF8 = 2,
  PD_STATUS_PARSE = 3,
  PD_STATUS_IO = 4,
  PD_STATUS_INVALID_GRAPH = 5,
  PD_STATUS_INVALID_CONFIG = 6,
  PD_STATUS_NOT_CONNECTED = 7,
  PD_STATUS_INTERNAL = 8,
} PdStatus;

// An embedded planar graph.
typedef struct PdGraph PdGraph;

// Run settings; obtain defaults from `pd_config_default`.
typedef struct PdConfig {
  // Target accuracy in (0, 0.7].
  double eps;
  // Graphs with at most this many vertices are solved exactly.
  size_t halt_size;
  // Recursion depth budget; 0 selects the default.
  size_t depth_cap;
  uint64_t seed;
  // Nonzero to perturb lengths (seeded) before solving.
  uint8_t perturb;
  // Nonzero to use the asymptotic halting size instead of `halt_size`.
  uint8_t paper_halt;
} PdConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default settings for accuracy `eps`.
struct PdConfig pd_config_default(double eps);

// Parses a graph from a NUL-terminated JSON document.
//
// # Safety
// `json` must be null or a valid C string; `out` must be writable.
enum PdStatus pd_graph_from_json(const char *json, struct PdGraph **out);

// Reads a graph file.
//
// # Safety
// `path` must be null or a valid C string; `out` must be writable.
enum PdStatus pd_graph_read_file(const char *path, struct PdGraph **out);

// A `width` x `height` grid with integer lengths in `[min_weight, max_weight]`.
//
// # Safety
// `out` must be writable.
enum PdStatus pd_graph_gen_grid(size_t width,
                                size_t height,
                                uint32_t min_weight,
                                uint32_t max_weight,
                                uint64_t seed,
                                struct PdGraph **out);

// A random maximal planar graph on `n >= 3` vertices.
//
// # Safety
// `out` must be writable.
enum PdStatus pd_graph_gen_face_split(size_t n,
                                      uint32_t min_weight,
                                      uint32_t max_weight,
                                      uint64_t seed,
                                      struct PdGraph **out);

// Number of vertices, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t pd_graph_vertex_count(const struct PdGraph *g);

// Releases a graph. Null is ignored.
//
// # Safety
// `g` must be null or a handle not yet freed.
void pd_graph_free(struct PdGraph *g);

// Writes `d'` with `d <= d' <= (1 + eps) d` to `out`.
//
// # Safety
// `g` and `cfg` must be live; `out` must be writable.
enum PdStatus pd_approx_diameter(const struct PdGraph *g, const struct PdConfig *cfg, double *out);

// Writes the exact marked diameter to `out` (quadratic time).
//
// # Safety
// `g` must be live; `out` must be writable.
enum PdStatus pd_exact_diameter(const struct PdGraph *g, double *out);

// Writes the full run report as a JSON string to `out`; free it with
// `pd_string_free`.
//
// # Safety
// `g` and `cfg` must be live; `out` must be writable.
enum PdStatus pd_approx_report_json(const struct PdGraph *g,
                                    const struct PdConfig *cfg,
                                    char **out);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void pd_string_free(char *s);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next library call on the same thread.
const char *pd_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLANAR_DIAMETER_H */
