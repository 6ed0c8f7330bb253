/* C interface to the pinchflow library. Every call returns a pf_status;
 * details of the last failure on the calling thread are available from
 * pf_last_error(). Strings handed out by the library are released with
 * pf_string_free. */
#ifndef PINCHFLOW_H
#define PINCHFLOW_H

#include <stddef.h>
#include <stdint.h>

#if defined(PINCHFLOW_BUILDING_LIBRARY)
#define PF_API __attribute__((visibility("default")))
#else
#define PF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pf_status {
    PF_OK = 0,
    PF_DOMAIN_ERROR = 1,
    PF_DERIVATIVE_AT_ZERO = 2,
    PF_ROOT_MISMATCH = 3,
    PF_GEOMETRY_ERROR = 4,
    PF_NON_EMBEDDED = 5,
    PF_FIXED_POINT = 6,
    PF_STEP_UNDERFLOW = 7,
    PF_MESH_DEGENERATE = 8,
    PF_DEGENERATE_GAMMA = 9,
    PF_CHECK_FAILURE = 10,
    PF_INVALID_ARGUMENT = 11,
    PF_IO_ERROR = 12,
    PF_INTERNAL_ERROR = 99
} pf_status;

typedef struct pf_thresholds pf_thresholds;
typedef struct pf_trace pf_trace;
typedef struct pf_reports pf_reports;

/* Echoed into every output as CSV comments or JSON metadata. */
typedef struct pf_provenance {
    const char* command;
    size_t count;
    const char* const* keys;
    const char* const* values;
} pf_provenance;

PF_API const char* pf_version(void);
PF_API const char* pf_last_error(void);
PF_API const char* pf_status_name(pf_status status);
PF_API void pf_string_free(char* s);

/* Thresholds for one (n, c). */
typedef struct pf_threshold_values {
    double x;
    double alpha, beta, gamma;
    double gamma_d1, gamma_d2;
    double omega, omega_d1, omega_d2;
    int branch_is_alpha;
} pf_threshold_values;

typedef struct pf_constants {
    double y_n, x0, x1, k_n, bneq_residual;
    int k_n_from_vertex;
} pf_constants;

PF_API pf_status pf_thresholds_create(int n, double c, pf_thresholds** out);
PF_API void pf_thresholds_destroy(pf_thresholds* t);
PF_API pf_status pf_thresholds_eval(const pf_thresholds* t, double x, pf_threshold_values* out);
PF_API pf_status pf_thresholds_constants(const pf_thresholds* t, pf_constants* out);
PF_API pf_status pf_thresholds_table_csv(const pf_thresholds* t, const double* xs, size_t count,
                                         const pf_provenance* prov, char** out);
PF_API pf_status pf_thresholds_constants_json(const pf_thresholds* t, const pf_provenance* prov, char** out);

/* Initial data as JSON state documents. */
PF_API pf_status pf_state_sphere_json(int n, double c, double rho, char** out);
PF_API pf_status pf_state_product_json(int n, double c, double lambda, char** out);
PF_API pf_status pf_state_product_r1sq_json(int n, double c, double r1sq, char** out);
/* phi0 (1 + amp cos(mode t)) around the equator, torus type. */
PF_API pf_status pf_state_latitude_json(int n, double c, double phi0, double amp, int mode, int grid, char** out);
/* Cap of angular radius r with relative perturbation amp, sphere type. */
PF_API pf_status pf_state_cap_json(int n, double c, double r, double amp, int mode, int grid, char** out);

/* Curvature report of a state, CSV s,H,h2,h0_2,gamma,margin. */
PF_API pf_status pf_state_curvature_csv(const char* state_json, int n, double c, const pf_provenance* prov,
                                        char** out);
/* 0 strict, 1 weak equality, 2 violated; margin is min(gamma - |h|^2). */
PF_API pf_status pf_state_classify(const char* state_json, int n, double c, int* kind, double* margin);

typedef struct pf_flow_config {
    int has_epsilon;
    double epsilon;
    double sigma;
    int has_eta;
    double eta;
    double dt_initial, dt_min, dt_max, t_max, tol;
    int has_h2_halt;
    double h2_halt;
    int grid_size;
    size_t record_stride;
    size_t exact_samples;
    int exact; /* product family only: sample the closed-form solution */
} pf_flow_config;

typedef struct pf_terminal {
    const char* kind; /* static string */
    double t;
    double T;
} pf_terminal;

PF_API void pf_flow_config_default(pf_flow_config* config);
PF_API pf_status pf_simulate(const char* state_json, int n, double c, const pf_flow_config* config,
                             pf_trace** out);
PF_API void pf_trace_destroy(pf_trace* trace);
PF_API pf_status pf_trace_terminal(const pf_trace* trace, pf_terminal* out);
PF_API size_t pf_trace_length(const pf_trace* trace);
PF_API pf_status pf_trace_csv(const pf_trace* trace, const pf_provenance* prov, char** out);
PF_API pf_status pf_trace_summary_json(const pf_trace* trace, const pf_provenance* prov, char** out);

typedef struct pf_suite_options {
    const int* dimensions;
    size_t dimension_count;
    const double* curvatures;
    size_t curvature_count;
    int log_points;
    int linear_points;
    double grid_lo;
    double grid_hi;
    uint64_t seed;
    int okumura_samples;
    int include_flows;
    unsigned threads; /* 0: PINCHFLOW_THREADS or hardware concurrency */
} pf_suite_options;

/* Defaults leave the dimension and curvature arrays NULL, meaning n = 3..12
 * and c in {0.25, 1, 4}. */
PF_API void pf_suite_options_default(pf_suite_options* options);
PF_API pf_status pf_verify_run(const pf_suite_options* options, pf_reports** out);
PF_API void pf_reports_destroy(pf_reports* reports);
PF_API size_t pf_reports_count(const pf_reports* reports);
PF_API size_t pf_reports_failed(const pf_reports* reports);
PF_API pf_status pf_reports_json(const pf_reports* reports, const pf_provenance* prov, char** out);
PF_API pf_status pf_reports_table(const pf_reports* reports, char** out);

#ifdef __cplusplus
}
#endif

#endif
