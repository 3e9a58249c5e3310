/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the CSMA back-off rate library.
 *
 * Graph handles are opaque. Every fallible call returns a csma_status; on
 * failure csma_last_error() describes the problem (thread local, valid until
 * the next call on the same thread). Nodes are 0-based. Output arrays are
 * caller-allocated with the documented length.
 */
#ifndef CSMA_CSMA_H
#define CSMA_CSMA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(CSMA_BUILDING_LIBRARY)
#define CSMA_API __attribute__((visibility("default")))
#else
#define CSMA_API
#endif

typedef enum csma_status {
  CSMA_OK = 0,
  CSMA_E_INVALID = 1,
  CSMA_E_NOT_CHORDAL = 2,
  CSMA_E_UNACHIEVABLE = 3,
  CSMA_E_CAP = 4,
  CSMA_E_NO_CONVERGENCE = 5,
  CSMA_E_IO = 6,
  CSMA_E_INTERNAL = 7
} csma_status;

typedef struct csma_graph csma_graph;

CSMA_API const char* csma_last_error(void);
CSMA_API int csma_rng_stream_version(void);

/* Strings returned by the library are freed with csma_string_free. */
CSMA_API void csma_string_free(char* s);

/* ---- graphs ---------------------------------------------------------- */

/* edges holds 2*m node ids. */
CSMA_API csma_status csma_graph_create(int n, const int* edges, size_t m, csma_graph** out);
CSMA_API void csma_graph_free(csma_graph* g);
CSMA_API int csma_graph_size(const csma_graph* g);
CSMA_API size_t csma_graph_edge_count(const csma_graph* g);
/* Writes 2*edge_count ids, edges with i < j in sorted order. */
CSMA_API csma_status csma_graph_edges(const csma_graph* g, int* out);
CSMA_API int csma_graph_has_coords(const csma_graph* g);
/* Writes 2*n coordinates (x0,y0,x1,...). */
CSMA_API csma_status csma_graph_coords(const csma_graph* g, double* out);

/* JSON graph file, or an edge list ("i j" per line) for other content. */
CSMA_API csma_status csma_graph_load(const char* path, csma_graph** out);
CSMA_API csma_status csma_graph_save(const csma_graph* g, const char* path);
CSMA_API csma_status csma_graph_to_json(const csma_graph* g, char** out);

CSMA_API csma_status csma_gen_geometric(int n, double radius, uint64_t seed, csma_graph** out);
/* max_clique 0 means unbounded. */
CSMA_API csma_status csma_gen_chordal(int n, double density, int max_clique, uint64_t seed,
                                      csma_graph** out);
CSMA_API csma_status csma_gen_line(int n, int beta, csma_graph** out);
/* beta holds n+1 entries. */
CSMA_API csma_status csma_gen_iline(const int* beta, size_t len, csma_graph** out);
CSMA_API csma_status csma_gen_clique_line(const int* sizes, size_t blocks, int beta,
                                          csma_graph** out);
CSMA_API csma_status csma_gen_tree(int n, uint64_t seed, csma_graph** out);
CSMA_API csma_status csma_gen_ring(int n, csma_graph** out);
CSMA_API csma_status csma_gen_complete(int n, csma_graph** out);
CSMA_API csma_status csma_gen_star(int leaves, csma_graph** out);

/* ---- chordal structure ------------------------------------------------ */

CSMA_API csma_status csma_is_chordal(const csma_graph* g, int* out);
CSMA_API csma_status csma_max_clique_size(const csma_graph* g, int* out);
/* {"cliques": [...], "tree_edges": [...]}; CSMA_E_NOT_CHORDAL otherwise. */
CSMA_API csma_status csma_clique_tree_json(const csma_graph* g, char** out);

/* ---- rates ------------------------------------------------------------ */

/* Method names: tree, line, iline, chordal-ct, chordal-peo, distributed, lcs,
 * bethe, completion, light-traffic. */
CSMA_API csma_status csma_method_from_name(const char* name, int* out);
CSMA_API const char* csma_method_name(int method);

/* rates receives n entries; margin may be NULL. */
CSMA_API csma_status csma_compute_rates(const csma_graph* g, const double* theta, int method,
                                        double* rates, double* margin);

/* ---- exact solver ----------------------------------------------------- */

CSMA_API void csma_set_enumeration_cap(int cap);
CSMA_API int csma_enumeration_cap(void);

/* theta receives n entries; z may be NULL. */
CSMA_API csma_status csma_exact_throughputs(const csma_graph* g, const double* rates,
                                            double* theta, double* z);
CSMA_API csma_status csma_achievable_general(const csma_graph* g, const double* theta,
                                             int* achievable, double* slack);
/* rates receives n entries; iterations and residual may be NULL. */
CSMA_API csma_status csma_invert_rates(const csma_graph* g, const double* theta, double tol,
                                       double* rates, long* iterations, double* residual);
/* Closed-form normalizing constant of a chordal network under its exact
 * rates, and the same constant by enumeration. */
CSMA_API csma_status csma_ztest(const csma_graph* g, const double* theta, double* closed_form,
                                double* enumerated);

/* ---- simulation ------------------------------------------------------- */

typedef struct csma_sim_config {
  double horizon;
  uint64_t seed;
  int deterministic_transmissions; /* 0: exponential(1), 1: fixed length 1 */
  double warmup;                   /* fraction of the horizon in [0, 0.5] */
  int replications;                /* >= 1 */
  int jobs;                        /* worker threads, >= 1 */
} csma_sim_config;

CSMA_API csma_sim_config csma_sim_default_config(void);

/* mean receives n entries; half_width (may be NULL) receives the 95%
 * half-width per node (infinite for one replication); high_rate_warning (may
 * be NULL) is set when some rate is large enough to slow mixing. */
CSMA_API csma_status csma_simulate(const csma_graph* g, const double* rates,
                                   const csma_sim_config* cfg, double* mean, double* half_width,
                                   int* high_rate_warning);

CSMA_API csma_status csma_deviation(const double* targets, const double* estimates, size_t n,
                                    double* mean_rel, double* max_rel);

#ifdef __cplusplus
}
#endif

#endif /* CSMA_CSMA_H */
