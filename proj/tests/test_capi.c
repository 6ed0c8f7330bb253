/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "pinchflow/pinchflow.h"

static int failures = 0;

#define EXPECT(cond)                                                          \
    do {                                                                      \
        if (!(cond)) {                                                        \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond,    \
                    pf_last_error());                                         \
            ++failures;                                                       \
        }                                                                     \
    } while (0)

static void thresholds(void) {
    pf_thresholds* t = NULL;
    EXPECT(pf_thresholds_create(2, 1.0, &t) == PF_DOMAIN_ERROR);
    EXPECT(t == NULL);
    EXPECT(strlen(pf_last_error()) > 0);

    EXPECT(pf_thresholds_create(10, 1.0, &t) == PF_OK);
    pf_constants k;
    EXPECT(pf_thresholds_constants(t, &k) == PF_OK);
    EXPECT(k.y_n == 12.0);
    EXPECT(fabs(k.k_n - 6.0) < 1e-14);
    EXPECT(k.k_n_from_vertex == 1);

    pf_threshold_values v;
    EXPECT(pf_thresholds_eval(t, 0.0, &v) == PF_OK);
    EXPECT(v.branch_is_alpha == 0);
    EXPECT(pf_thresholds_eval(t, -1.0, &v) == PF_DOMAIN_ERROR);

    const double xs[] = {0.0, 12.0, 40.0};
    const char* keys[] = {"n"};
    const char* values[] = {"10"};
    const pf_provenance prov = {"capi test", 1, keys, values};
    char* csv = NULL;
    EXPECT(pf_thresholds_table_csv(t, xs, 3, &prov, &csv) == PF_OK);
    EXPECT(csv != NULL && strstr(csv, "# command: capi test") != NULL);
    pf_string_free(csv);

    char* js = NULL;
    EXPECT(pf_thresholds_constants_json(t, NULL, &js) == PF_OK);
    EXPECT(js != NULL && strstr(js, "\"y_n\"") != NULL);
    pf_string_free(js);
    pf_thresholds_destroy(t);
}

static void flows(void) {
    char* state = NULL;
    EXPECT(pf_state_product_r1sq_json(10, 1.0, 0.75, &state) == PF_OK);

    int kind = -1;
    double margin = 0.0;
    EXPECT(pf_state_classify(state, 10, 1.0, &kind, &margin) == PF_OK);
    EXPECT(kind == 1);

    pf_flow_config cfg;
    pf_flow_config_default(&cfg);
    cfg.exact = 1;
    pf_trace* tr = NULL;
    EXPECT(pf_simulate(state, 10, 1.0, &cfg, &tr) == PF_OK);
    pf_terminal term;
    EXPECT(pf_trace_terminal(tr, &term) == PF_OK);
    EXPECT(strcmp(term.kind, "GreatCircleCollapse") == 0);
    EXPECT(fabs(term.T - log(6.0) / 20.0) < 1e-15);
    EXPECT(pf_trace_length(tr) == cfg.exact_samples);
    char* csv = NULL;
    EXPECT(pf_trace_csv(tr, NULL, &csv) == PF_OK);
    pf_string_free(csv);
    pf_trace_destroy(tr);
    pf_string_free(state);

    EXPECT(pf_state_cap_json(5, 1.0, 1.0, 0.05, 3, 48, &state) == PF_OK);
    EXPECT(pf_state_classify(state, 5, 1.0, &kind, &margin) == PF_OK);
    EXPECT(kind == 0 && margin > 0.0);
    pf_string_free(state);

    cfg.exact = 0;
    EXPECT(pf_simulate("{\"family\":", 3, 1.0, &cfg, &tr) == PF_IO_ERROR);
    EXPECT(pf_simulate("{\"family\":\"sphere\",\"rho\":-1}", 3, 1.0, &cfg, &tr) == PF_GEOMETRY_ERROR);
    cfg.sigma = 2.0;
    EXPECT(pf_simulate("{\"family\":\"sphere\",\"rho\":1}", 3, 1.0, &cfg, &tr) == PF_INVALID_ARGUMENT);
}

static void suite(void) {
    pf_suite_options o;
    pf_suite_options_default(&o);
    const int dims[] = {4};
    const double cs[] = {1.0};
    o.dimensions = dims;
    o.dimension_count = 1;
    o.curvatures = cs;
    o.curvature_count = 1;
    o.log_points = 100;
    o.linear_points = 200;
    o.okumura_samples = 1000;
    o.include_flows = 0;
    pf_reports* r = NULL;
    EXPECT(pf_verify_run(&o, &r) == PF_OK);
    EXPECT(pf_reports_count(r) > 10);
    EXPECT(pf_reports_failed(r) == 0);
    char* js = NULL;
    EXPECT(pf_reports_json(r, NULL, &js) == PF_OK);
    EXPECT(js != NULL && strstr(js, "\"gamma.i\"") != NULL);
    pf_string_free(js);
    pf_reports_destroy(r);
}

int main(void) {
    EXPECT(strcmp(pf_status_name(PF_NON_EMBEDDED), "NonEmbedded") == 0);
    thresholds();
    flows();
    suite();
    if (failures) {
        fprintf(stderr, "%d C API expectations failed\n", failures);
        return 1;
    }
    printf("C API ok (version %s)\n", pf_version());
    return 0;
}
