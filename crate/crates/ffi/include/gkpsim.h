#ifndef GKPSIM_H
#define GKPSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GkpsimDims {
  GKPSIM_DIMS_D1 = 0,
  GKPSIM_DIMS_D2 = 1,
  GKPSIM_DIMS_D3 = 2,
  GKPSIM_DIMS_MACRONODE_RHG = 3,
} GkpsimDims;

typedef enum GkpsimPair {
  GKPSIM_PAIR_EPR = 0,
  GKPSIM_PAIR_GKP = 1,
  GKPSIM_PAIR_HYBRID = 2,
} GkpsimPair;

typedef enum GkpsimStatus {
  GKPSIM_STATUS_OK = 0,
  GKPSIM_STATUS_DOMAIN = 1,
  GKPSIM_STATUS_CONTRACT = 2,
  GKPSIM_STATUS_SINGULAR = 3,
  GKPSIM_STATUS_RESOURCE = 4,
  GKPSIM_STATUS_NO_CROSSING = 5,
  GKPSIM_STATUS_CONFIG = 6,
  GKPSIM_STATUS_IO = 7,
  GKPSIM_STATUS_NULL_POINTER = 8,
  GKPSIM_STATUS_BUFFER_TOO_SMALL = 9,
  GKPSIM_STATUS_PANIC = 10,
} GkpsimStatus;

typedef enum GkpsimWeights {
  GKPSIM_WEIGHTS_UNIFORM = 0,
  GKPSIM_WEIGHTS_CALIBRATED = 1,
} GkpsimWeights;

typedef struct GkpsimCluster GkpsimCluster;

typedef struct GkpsimExperiment GkpsimExperiment;

// Simulation parameters; mirrors the `simulate` command flags.
typedef struct GkpsimSimConfig {
  uint32_t distance;
  uint32_t rounds;
  double squeezing_db;
  double chi;
  uint32_t squeeze_step;
  uint64_t seed;
  enum GkpsimWeights weights;
  bool identity_noise;
  uint64_t calibration_shots;
} GkpsimSimConfig;

typedef struct GkpsimRate {
  uint64_t shots;
  uint64_t logical_errors;
  uint64_t x_errors;
  uint64_t z_errors;
  double rate;
  double ci_low;
  double ci_high;
} GkpsimRate;

typedef struct GkpsimEdge {
  size_t a;
  size_t b;
  double weight;
} GkpsimEdge;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *gkpsim_last_error(void);

// Library version as a static NUL-terminated string.
const char *gkpsim_version(void);

// Defaults for distance `d`: `d` rounds, χ = 1, no squeezing step,
// uniform weights.
struct GkpsimSimConfig gkpsim_sim_config_default(uint32_t distance, double squeezing_db);

// Odd-bin probability of a centred Gaussian of width `sigma` on a lattice
// of the given spacing.
//
// # Safety
// `out` must be null or point to writable memory for one `double`.
enum GkpsimStatus gkpsim_logical_flip_probability(double sigma, double spacing, double *out);

// Builds the decoders (and calibrates, for calibrated weights).
//
// # Safety
// `config` must point to a valid config; `out` to writable handle storage.
enum GkpsimStatus gkpsim_experiment_new(const struct GkpsimSimConfig *config,
                                        struct GkpsimExperiment **out);

// Estimates the logical error rate from `shots` shots.
//
// # Safety
// `exp` must be a live handle; `out` writable.
enum GkpsimStatus gkpsim_experiment_estimate(const struct GkpsimExperiment *exp,
                                             uint64_t shots,
                                             struct GkpsimRate *out);

// # Safety
// `exp` must be null or a handle not yet freed.
void gkpsim_experiment_free(struct GkpsimExperiment *exp);

// Builds a lattice; `mode_cap` 0 selects the default cap. With `reduce`
// an RHG macronode lattice is reduced to its central modes.
//
// # Safety
// `out` must point to writable handle storage.
enum GkpsimStatus gkpsim_cluster_build_lattice(double r,
                                               size_t n,
                                               size_t timebins,
                                               enum GkpsimDims dims,
                                               bool reduce,
                                               size_t mode_cap,
                                               struct GkpsimCluster **out);

// # Safety
// `out` must point to writable handle storage.
enum GkpsimStatus gkpsim_cluster_build_oeg(double r,
                                           enum GkpsimPair pair,
                                           uint32_t j,
                                           struct GkpsimCluster **out);

// # Safety
// `c` must be a live handle.
size_t gkpsim_cluster_num_nodes(const struct GkpsimCluster *c);

// # Safety
// `c` must be a live handle.
size_t gkpsim_cluster_num_edges(const struct GkpsimCluster *c);

// Copies the edges into `out`, which holds `len` entries.
//
// # Safety
// `c` must be a live handle and `out` valid for `len` writes.
enum GkpsimStatus gkpsim_cluster_edges(const struct GkpsimCluster *c,
                                       struct GkpsimEdge *out,
                                       size_t len);

// Writes one nullifier variance per node into `out` (`len` entries).
//
// # Safety
// `c` must be a live handle and `out` valid for `len` writes.
enum GkpsimStatus gkpsim_cluster_nullifier_variances(const struct GkpsimCluster *c,
                                                     double *out,
                                                     size_t len);

// The `cluster-build` JSON document; free with [`gkpsim_string_free`].
//
// # Safety
// `c` must be a live handle; `out` writable.
enum GkpsimStatus gkpsim_cluster_to_json(const struct GkpsimCluster *c, char **out);

// # Safety
// `c` must be null or a handle not yet freed.
void gkpsim_cluster_free(struct GkpsimCluster *c);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void gkpsim_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GKPSIM_H */
