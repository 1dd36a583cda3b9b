/*
 * ddsplit C API.
 *
 * Regionally-additive (domain decomposition) time stepping for
 * du/dt + A u = f on a uniform 2D grid. Every function returns a dds_status;
 * on failure dds_last_error() describes the problem (thread-local, valid until
 * the next failing call on the same thread).
 *
 * Handles are opaque. A single handle must not be used from two threads at
 * once; distinct handles are independent.
 */
#ifndef DDSPLIT_H
#define DDSPLIT_H

#include <stddef.h>

#if defined(_WIN32)
#define DDS_API __declspec(dllexport)
#else
#define DDS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dds_status {
  DDS_OK = 0,
  DDS_ERROR_CONFIG = 1,    /* invalid configuration or argument */
  DDS_ERROR_NUMERICAL = 2, /* solver or eigen iteration failed */
  DDS_ERROR_IO = 3,        /* output file could not be written */
  DDS_ERROR_INTERNAL = 4
} dds_status;

typedef enum dds_problem { DDS_PROBLEM_HEAT = 0, DDS_PROBLEM_CONVDIFF = 1 } dds_problem;

typedef enum dds_scheme {
  DDS_SCHEME_EXPLICIT = 0,
  DDS_SCHEME_WEIGHTED = 1,
  DDS_SCHEME_REGADD = 2,
  DDS_SCHEME_REGMULT = 3,
  DDS_SCHEME_VECTOR = 4
} dds_scheme;

typedef enum dds_overlap {
  DDS_OVERLAP_INTEGER = 0,
  DDS_OVERLAP_HALF = 1,
  DDS_OVERLAP_WIDE3H = 2
} dds_overlap;

typedef enum dds_axis { DDS_AXIS_X1 = 0, DDS_AXIS_X2 = 1 } dds_axis;

typedef struct dds_config {
  int problem; /* dds_problem */
  int scheme;  /* dds_scheme */
  double sigma;
  int cells1; /* N1, N2: cells per axis on the unit square */
  int cells2;
  double final_time;
  int steps;
  int mode1; /* exact-solution mode numbers n1, n2 */
  int mode2;
  double v1; /* constant velocities, convdiff only */
  double v2;
  int axis; /* dds_axis */
  int strips;
  int groups;
  int overlap; /* dds_overlap */
  double solver_tolerance;
} dds_config;

typedef struct dds_experiment_impl* dds_experiment;

/* Defaults: heat, weighted, sigma 1, 32x32, T 0.01, 10 steps, n = (2, 1),
 * v = (1, 0.5), axis x1, 4 strips, 2 groups, integer overlap, tol 1e-12. */
DDS_API void dds_config_init(dds_config* config);

DDS_API const char* dds_last_error(void);
DDS_API const char* dds_status_string(dds_status status);
DDS_API const char* dds_version(void);

/* Name <-> enum for the CLI spellings (weighted, regadd, integer, wide3h, ...). */
DDS_API dds_status dds_parse_scheme(const char* name, int* scheme);
DDS_API dds_status dds_parse_overlap(const char* name, int* overlap);
DDS_API dds_status dds_parse_problem(const char* name, int* problem);
DDS_API const char* dds_scheme_name(int scheme);
DDS_API const char* dds_overlap_name(int overlap);

DDS_API dds_status dds_experiment_create(const dds_config* config, dds_experiment* out);
DDS_API void dds_experiment_destroy(dds_experiment experiment);

DDS_API size_t dds_experiment_unknowns(dds_experiment experiment);

/* Runs the configured scheme; results are kept in the handle. */
DDS_API dds_status dds_experiment_run(dds_experiment experiment);

/* eps(t^n), n = 0..steps. Writes min(capacity, steps+1) values; *count
 * receives steps+1. Requires a prior run. */
DDS_API dds_status dds_experiment_errors(dds_experiment experiment, double* out, size_t capacity, size_t* count);
DDS_API dds_status dds_experiment_final_error(dds_experiment experiment, double* eps);

/* CSV outputs: `step,t,eps`; local error field `i1,i2,x1,x2,value`;
 * partition `group,i1,i2,chi` and `group,axis,edge_i1,edge_i2,chi_tilde`. */
DDS_API dds_status dds_experiment_write_errors(dds_experiment experiment, const char* path);
DDS_API dds_status dds_experiment_write_error_field(dds_experiment experiment, const char* path);
DDS_API dds_status dds_experiment_write_partition(dds_experiment experiment, const char* node_path,
                                                  const char* edge_path);

/* Max |error| inside / outside the overlap band dilated by `margin` cells. */
DDS_API dds_status dds_experiment_localization(dds_experiment experiment, int margin, double* max_inside,
                                               double* max_outside, int* argmax_inside);

DDS_API dds_status dds_experiment_exchange_volume(dds_experiment experiment, size_t* counts, size_t capacity,
                                                  size_t* groups);

/* Spectral norm of one source-free step of the configured scheme. */
DDS_API dds_status dds_experiment_transition_norm(dds_experiment experiment, double tau, double sigma,
                                                  double* norm);

/* Largest eigenvalue of the symmetric part of A. */
DDS_API dds_status dds_experiment_max_eigenvalue(dds_experiment experiment, double* lambda);

/* Runs all configs and writes `scheme,overlap,p,eps_T,transition_norm,exchange`
 * sorted by eps_T. */
DDS_API dds_status dds_compare(const dds_config* configs, size_t count, int with_norm, const char* csv_path);

/* Writes `scheme,sigma,tau,norm` for every combination; *flagged receives the
 * number of rows with norm > 1 + 1e-8. */
DDS_API dds_status dds_stability(const dds_config* base, const int* schemes, size_t scheme_count,
                                 const double* sigmas, size_t sigma_count, const double* taus, size_t tau_count,
                                 const char* csv_path, size_t* flagged);

#ifdef __cplusplus
}
#endif

#endif /* DDSPLIT_H */
