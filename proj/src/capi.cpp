#include "pinchflow/pinchflow.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "pinchflow/error.hpp"
#include "pinchflow/io.hpp"
#include "pinchflow/profile.hpp"

using namespace pinchflow;

struct pf_thresholds {
    Thresholds t;
};

struct pf_trace {
    FlowTrace trace;
};

struct pf_reports {
    std::vector<CheckReport> reports;
};

namespace {

thread_local std::string last_error;

pf_status status_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::DomainError: return PF_DOMAIN_ERROR;
    case ErrorCode::DerivativeAtZero: return PF_DERIVATIVE_AT_ZERO;
    case ErrorCode::RootMismatch: return PF_ROOT_MISMATCH;
    case ErrorCode::GeometryError: return PF_GEOMETRY_ERROR;
    case ErrorCode::NonEmbedded: return PF_NON_EMBEDDED;
    case ErrorCode::FixedPoint: return PF_FIXED_POINT;
    case ErrorCode::StepUnderflow: return PF_STEP_UNDERFLOW;
    case ErrorCode::MeshDegenerate: return PF_MESH_DEGENERATE;
    case ErrorCode::DegenerateGamma: return PF_DEGENERATE_GAMMA;
    case ErrorCode::CheckFailure: return PF_CHECK_FAILURE;
    case ErrorCode::InvalidArgument: return PF_INVALID_ARGUMENT;
    case ErrorCode::IoError: return PF_IO_ERROR;
    }
    return PF_INTERNAL_ERROR;
}

template <class F>
pf_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return PF_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return PF_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return PF_INTERNAL_ERROR;
    }
}

void need(const void* p, const char* what) {
    if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

Provenance provenance(const pf_provenance* prov) {
    Provenance p;
    if (!prov) return p;
    p.command = prov->command ? prov->command : "";
    if (prov->count > 0) {
        need(prov->keys, "provenance keys");
        need(prov->values, "provenance values");
    }
    for (size_t i = 0; i < prov->count; ++i) {
        p.config.emplace_back(prov->keys[i] ? prov->keys[i] : "", prov->values[i] ? prov->values[i] : "");
    }
    return p;
}

// State documents may carry their own n and c; they must agree with the call.
HypersurfaceState read_state(const char* text, const PinchingParams& p) {
    need(text, "state");
    StateFile f = parse_state_json(text);
    if (f.n && *f.n != p.n) fail(ErrorCode::InvalidArgument, "state file n differs from the requested n");
    if (f.c && *f.c != p.c) fail(ErrorCode::InvalidArgument, "state file c differs from the requested c");
    return std::move(f.state);
}

FlowConfig flow_config(const pf_flow_config* c) {
    FlowConfig f;
    if (!c) return f;
    if (c->has_epsilon) f.epsilon = c->epsilon;
    f.sigma = c->sigma;
    if (c->has_eta) f.eta = c->eta;
    f.dt_initial = c->dt_initial;
    f.dt_min = c->dt_min;
    f.dt_max = c->dt_max;
    f.t_max = c->t_max;
    f.tol = c->tol;
    if (c->has_h2_halt) f.h2_halt = c->h2_halt;
    f.grid_size = c->grid_size;
    f.record_stride = c->record_stride;
    f.exact_samples = c->exact_samples;
    return f;
}

} // namespace

extern "C" {

const char* pf_version(void) { return PINCHFLOW_VERSION; }

const char* pf_last_error(void) { return last_error.c_str(); }

const char* pf_status_name(pf_status status) {
    switch (status) {
    case PF_OK: return "Ok";
    case PF_DOMAIN_ERROR: return "DomainError";
    case PF_DERIVATIVE_AT_ZERO: return "DerivativeAtZero";
    case PF_ROOT_MISMATCH: return "RootMismatch";
    case PF_GEOMETRY_ERROR: return "GeometryError";
    case PF_NON_EMBEDDED: return "NonEmbedded";
    case PF_FIXED_POINT: return "FixedPoint";
    case PF_STEP_UNDERFLOW: return "StepUnderflow";
    case PF_MESH_DEGENERATE: return "MeshDegenerate";
    case PF_DEGENERATE_GAMMA: return "DegenerateGamma";
    case PF_CHECK_FAILURE: return "CheckFailure";
    case PF_INVALID_ARGUMENT: return "InvalidArgument";
    case PF_IO_ERROR: return "IoError";
    case PF_INTERNAL_ERROR: return "InternalError";
    }
    return "Unknown";
}

void pf_string_free(char* s) { std::free(s); }

pf_status pf_thresholds_create(int n, double c, pf_thresholds** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        *out = new pf_thresholds{Thresholds(PinchingParams::make(n, c))};
    });
}

void pf_thresholds_destroy(pf_thresholds* t) { delete t; }

pf_status pf_thresholds_eval(const pf_thresholds* t, double x, pf_threshold_values* out) {
    return guarded([&] {
        need(t, "thresholds");
        need(out, "out");
        const ThresholdBundle b = t->t.evaluate(x);
        *out = {b.x,        b.alpha, b.beta,     b.gamma,    b.gamma_d1,
                b.gamma_d2, b.omega, b.omega_d1, b.omega_d2, b.active_branch == Branch::Alpha};
    });
}

pf_status pf_thresholds_constants(const pf_thresholds* t, pf_constants* out) {
    return guarded([&] {
        need(t, "thresholds");
        need(out, "out");
        const CriticalConstants& k = t->t.constants();
        *out = {k.y_n, k.x0, k.x1, k.k_n, k.bneq_residual, k.k_n_branch == KnBranch::Vertex};
    });
}

pf_status pf_thresholds_table_csv(const pf_thresholds* t, const double* xs, size_t count, const pf_provenance* prov,
                                  char** out) {
    return guarded([&] {
        need(t, "thresholds");
        need(out, "out");
        if (count > 0) need(xs, "xs");
        std::ostringstream os;
        write_threshold_csv(os, t->t, std::vector<double>(xs, xs + count), provenance(prov));
        *out = dup(os.str());
    });
}

pf_status pf_thresholds_constants_json(const pf_thresholds* t, const pf_provenance* prov, char** out) {
    return guarded([&] {
        need(t, "thresholds");
        need(out, "out");
        *out = dup(constants_json(t->t, provenance(prov)));
    });
}

pf_status pf_state_sphere_json(int n, double c, double rho, char** out) {
    return guarded([&] {
        need(out, "out");
        const PinchingParams p = PinchingParams::make(n, c);
        const HypersurfaceState s = GeodesicSphere{rho};
        validate_state(s, p);
        *out = dup(state_json(s, p));
    });
}

pf_status pf_state_product_json(int n, double c, double lambda, char** out) {
    return guarded([&] {
        need(out, "out");
        const PinchingParams p = PinchingParams::make(n, c);
        const HypersurfaceState s = ProductSn1S1{lambda};
        validate_state(s, p);
        *out = dup(state_json(s, p));
    });
}

pf_status pf_state_product_r1sq_json(int n, double c, double r1sq, char** out) {
    return guarded([&] {
        need(out, "out");
        const PinchingParams p = PinchingParams::make(n, c);
        *out = dup(state_json(product_from_r1sq(r1sq, c), p));
    });
}

pf_status pf_state_latitude_json(int n, double c, double phi0, double amp, int mode, int grid, char** out) {
    return guarded([&] {
        need(out, "out");
        const PinchingParams p = PinchingParams::make(n, c);
        const Axisymmetric a =
            amp == 0.0 ? latitude_profile(phi0, grid) : perturbed_latitude_profile(phi0, amp, mode, grid);
        *out = dup(state_json(a, p));
    });
}

pf_status pf_state_cap_json(int n, double c, double r, double amp, int mode, int grid, char** out) {
    return guarded([&] {
        need(out, "out");
        const PinchingParams p = PinchingParams::make(n, c);
        const Axisymmetric a = amp == 0.0 ? cap_profile(r, grid) : perturbed_cap_profile(r, amp, mode, grid);
        *out = dup(state_json(a, p));
    });
}

pf_status pf_state_curvature_csv(const char* state_json_text, int n, double c, const pf_provenance* prov,
                                 char** out) {
    return guarded([&] {
        need(out, "out");
        const PinchingParams p = PinchingParams::make(n, c);
        const HypersurfaceState s = read_state(state_json_text, p);
        const Thresholds t(p);
        std::ostringstream os;
        write_curvature_csv(os, curvature_of(s, p), t, provenance(prov));
        *out = dup(os.str());
    });
}

pf_status pf_state_classify(const char* state_json_text, int n, double c, int* kind, double* margin) {
    return guarded([&] {
        need(kind, "kind");
        need(margin, "margin");
        const PinchingParams p = PinchingParams::make(n, c);
        const HypersurfaceState s = read_state(state_json_text, p);
        const PinchingClass k = classify_pinching(curvature_of(s, p), Thresholds(p));
        *kind = static_cast<int>(k.kind);
        *margin = k.margin;
    });
}

void pf_flow_config_default(pf_flow_config* config) {
    if (!config) return;
    const FlowConfig f;
    *config = pf_flow_config{};
    config->sigma = f.sigma;
    config->dt_initial = f.dt_initial;
    config->dt_min = f.dt_min;
    config->dt_max = f.dt_max;
    config->t_max = f.t_max;
    config->tol = f.tol;
    config->grid_size = f.grid_size;
    config->record_stride = f.record_stride;
    config->exact_samples = f.exact_samples;
}

pf_status pf_simulate(const char* state_json_text, int n, double c, const pf_flow_config* config, pf_trace** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        const PinchingParams p = PinchingParams::make(n, c);
        const HypersurfaceState s = read_state(state_json_text, p);
        const FlowConfig f = flow_config(config);
        if (config && config->exact) {
            const auto* product = std::get_if<ProductSn1S1>(&s);
            if (!product) fail(ErrorCode::InvalidArgument, "the closed-form solution exists for the product family only");
            *out = new pf_trace{flow_product_exact(*product, p, f)};
        } else {
            *out = new pf_trace{simulate(s, p, f)};
        }
    });
}

void pf_trace_destroy(pf_trace* trace) { delete trace; }

pf_status pf_trace_terminal(const pf_trace* trace, pf_terminal* out) {
    return guarded([&] {
        need(trace, "trace");
        need(out, "out");
        *out = {to_string(trace->trace.terminal.kind), trace->trace.terminal.t, trace->trace.terminal.T};
    });
}

size_t pf_trace_length(const pf_trace* trace) { return trace ? trace->trace.monitors.size() : 0; }

pf_status pf_trace_csv(const pf_trace* trace, const pf_provenance* prov, char** out) {
    return guarded([&] {
        need(trace, "trace");
        need(out, "out");
        std::ostringstream os;
        write_trace_csv(os, trace->trace, provenance(prov));
        *out = dup(os.str());
    });
}

pf_status pf_trace_summary_json(const pf_trace* trace, const pf_provenance* prov, char** out) {
    return guarded([&] {
        need(trace, "trace");
        need(out, "out");
        *out = dup(trace_summary_json(trace->trace, provenance(prov)));
    });
}

void pf_suite_options_default(pf_suite_options* options) {
    if (!options) return;
    const SuiteOptions s;
    *options = pf_suite_options{};
    options->log_points = s.grid.log_points;
    options->linear_points = s.grid.linear_points;
    options->grid_lo = s.grid.lo;
    options->grid_hi = s.grid.hi;
    options->seed = s.seed;
    options->okumura_samples = s.okumura_samples;
    options->include_flows = s.include_flows;
    options->threads = s.threads;
}

pf_status pf_verify_run(const pf_suite_options* options, pf_reports** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        SuiteOptions s;
        if (options) {
            if (options->dimensions) s.dimensions.assign(options->dimensions, options->dimensions + options->dimension_count);
            if (options->curvatures) s.curvatures.assign(options->curvatures, options->curvatures + options->curvature_count);
            s.grid = {options->log_points, options->linear_points, options->grid_lo, options->grid_hi};
            s.seed = options->seed;
            s.okumura_samples = options->okumura_samples;
            s.include_flows = options->include_flows != 0;
            s.threads = options->threads;
        }
        if (s.okumura_samples < 1) fail(ErrorCode::InvalidArgument, "okumura_samples must be positive");
        *out = new pf_reports{run_suite(s)};
    });
}

void pf_reports_destroy(pf_reports* reports) { delete reports; }

size_t pf_reports_count(const pf_reports* reports) { return reports ? reports->reports.size() : 0; }

size_t pf_reports_failed(const pf_reports* reports) {
    if (!reports) return 0;
    size_t failed = 0;
    for (const CheckReport& r : reports->reports) failed += !r.passed;
    return failed;
}

pf_status pf_reports_json(const pf_reports* reports, const pf_provenance* prov, char** out) {
    return guarded([&] {
        need(reports, "reports");
        need(out, "out");
        *out = dup(reports_json(reports->reports, provenance(prov)));
    });
}

pf_status pf_reports_table(const pf_reports* reports, char** out) {
    return guarded([&] {
        need(reports, "reports");
        need(out, "out");
        *out = dup(reports_table(reports->reports));
    });
}

} // extern "C"
