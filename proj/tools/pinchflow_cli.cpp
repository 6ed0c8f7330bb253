// Command-line front end. Talks to the library through the C interface only.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pinchflow/pinchflow.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;

struct Failure {
    int exit_code;
    std::string message;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Bad input is a usage error; anything the numerics reject at run time is not.
int exit_for(pf_status s) {
    switch (s) {
    case PF_INVALID_ARGUMENT:
    case PF_DOMAIN_ERROR:
    case PF_IO_ERROR:
    case PF_GEOMETRY_ERROR:
    case PF_NON_EMBEDDED:
    case PF_FIXED_POINT: return kExitUsage;
    default: return kExitCheck;
    }
}

void check(pf_status s, const std::string& context) {
    if (s != PF_OK) throw Failure{exit_for(s), context + ": " + pf_status_name(s) + ": " + pf_last_error()};
}

struct CString {
    char* p = nullptr;
    ~CString() { pf_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

class Echo {
public:
    explicit Echo(std::string command) : command_(std::move(command)) {}
    Echo& add(const std::string& k, const std::string& v) {
        keys_.push_back(k);
        values_.push_back(v);
        return *this;
    }
    Echo& add(const std::string& k, double v) { return add(k, num(v)); }
    Echo& add(const std::string& k, int v) { return add(k, std::to_string(v)); }

    pf_provenance view() {
        ckeys_.clear();
        cvalues_.clear();
        for (const std::string& k : keys_) ckeys_.push_back(k.c_str());
        for (const std::string& v : values_) cvalues_.push_back(v.c_str());
        return {command_.c_str(), keys_.size(), ckeys_.data(), cvalues_.data()};
    }

private:
    std::string command_;
    std::vector<std::string> keys_, values_;
    std::vector<const char*> ckeys_, cvalues_;
};

void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Failure{kExitUsage, "cannot open " + path + " for writing"};
    f << text;
    if (!f) throw Failure{kExitCheck, "write to " + path + " failed"};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Failure{kExitUsage, "cannot read " + path};
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

struct Common {
    int n = 10;
    double c = 1.0;
    std::string out = "-";
    std::string format;
};

void add_common(CLI::App* cmd, Common& o) {
    cmd->add_option("--n", o.n, "hypersurface dimension (n >= 3)")->capture_default_str();
    cmd->add_option("--c", o.c, "sectional curvature of the ambient sphere (c > 0)")->capture_default_str();
    cmd->add_option("-o,--out", o.out, "output path, - for stdout")->capture_default_str();
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

void require_format(const Common& o, const char* allowed, const char* command) {
    if (!o.format.empty() && o.format != allowed) {
        throw Failure{kExitUsage, std::string(command) + " writes " + allowed + " only"};
    }
}

struct ThresholdOpts {
    Common common;
    std::vector<double> xs;
    double x_min = 0.0;
    double x_max = 100.0;
    int points = 101;
};

int run_thresholds(ThresholdOpts& o) {
    require_format(o.common, "csv", "thresholds");
    std::vector<double> xs = o.xs;
    if (xs.empty()) {
        if (o.points < 2 || !(o.x_max > o.x_min)) throw Failure{kExitUsage, "need --points >= 2 and --x-max > --x-min"};
        for (int i = 0; i < o.points; ++i) xs.push_back(o.x_min + (o.x_max - o.x_min) * i / (o.points - 1));
    }
    pf_thresholds* raw = nullptr;
    check(pf_thresholds_create(o.common.n, o.common.c, &raw), "thresholds");
    std::unique_ptr<pf_thresholds, decltype(&pf_thresholds_destroy)> t(raw, pf_thresholds_destroy);
    Echo echo("thresholds");
    echo.add("n", o.common.n).add("c", o.common.c).add("points", static_cast<int>(xs.size()));
    if (o.xs.empty()) echo.add("x_min", o.x_min).add("x_max", o.x_max);
    pf_provenance prov = echo.view();
    CString csv;
    check(pf_thresholds_table_csv(t.get(), xs.data(), xs.size(), &prov, &csv.p), "thresholds");
    emit(o.common.out, csv.str());
    return kExitOk;
}

int run_constants(Common& o) {
    require_format(o, "json", "constants");
    pf_thresholds* raw = nullptr;
    check(pf_thresholds_create(o.n, o.c, &raw), "constants");
    std::unique_ptr<pf_thresholds, decltype(&pf_thresholds_destroy)> t(raw, pf_thresholds_destroy);
    Echo echo("constants");
    echo.add("n", o.n).add("c", o.c);
    pf_provenance prov = echo.view();
    CString js;
    check(pf_thresholds_constants_json(t.get(), &prov, &js.p), "constants");
    emit(o.out, js.str());
    return kExitOk;
}

struct VerifyOpts {
    Common common;
    std::vector<int> dims{3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<double> curvatures{0.25, 1.0, 4.0};
    int log_points = 2000;
    int linear_points = 10000;
    std::uint64_t seed = 20240531;
    int okumura = 100000;
    bool no_flows = false;
    unsigned threads = 0;
    bool quiet = false;
};

int run_verify(VerifyOpts& o) {
    require_format(o.common, "json", "verify");
    pf_suite_options s;
    pf_suite_options_default(&s);
    s.dimensions = o.dims.data();
    s.dimension_count = o.dims.size();
    s.curvatures = o.curvatures.data();
    s.curvature_count = o.curvatures.size();
    s.log_points = o.log_points;
    s.linear_points = o.linear_points;
    s.seed = o.seed;
    s.okumura_samples = o.okumura;
    s.include_flows = !o.no_flows;
    s.threads = o.threads;
    pf_reports* raw = nullptr;
    check(pf_verify_run(&s, &raw), "verify");
    std::unique_ptr<pf_reports, decltype(&pf_reports_destroy)> reports(raw, pf_reports_destroy);

    std::string dims, curvs;
    for (int n : o.dims) dims += (dims.empty() ? "" : ",") + std::to_string(n);
    for (double c : o.curvatures) curvs += (curvs.empty() ? "" : ",") + num(c);
    Echo echo("verify");
    echo.add("dimensions", dims).add("curvatures", curvs).add("log_points", o.log_points);
    echo.add("linear_points", o.linear_points).add("seed", std::to_string(o.seed)).add("okumura_samples", o.okumura);
    echo.add("flows", o.no_flows ? "off" : "on");
    pf_provenance prov = echo.view();
    CString js, table;
    check(pf_reports_json(reports.get(), &prov, &js.p), "verify");
    check(pf_reports_table(reports.get(), &table.p), "verify");
    if (o.common.out != "-") {
        emit(o.common.out, js.str());
        if (!o.quiet) std::cout << table.str();
    } else {
        std::cout << js.str();
        if (!o.quiet) std::cerr << table.str();
    }
    return pf_reports_failed(reports.get()) == 0 ? kExitOk : kExitCheck;
}

struct SimulateOpts {
    Common common;
    std::string family;
    std::string state_file;
    double rho = std::nan("");
    double lambda = std::nan("");
    double r1sq = std::nan("");
    std::string profile = "latitude";
    double phi0 = 0.5;
    double radius = 1.0;
    double amp = 0.0;
    int mode = 2;
    int grid = 64;
    pf_flow_config flow{};
    double epsilon = std::nan("");
    double eta = std::nan("");
    double h2_halt = std::nan("");
    bool exact = false;
    std::string summary;
    std::string curvature_out;
};

std::string initial_state(SimulateOpts& o, Echo& echo) {
    const int n = o.common.n;
    const double c = o.common.c;
    CString js;
    if (!o.state_file.empty()) {
        echo.add("state_file", o.state_file);
        return slurp(o.state_file);
    }
    echo.add("family", o.family);
    if (o.family == "sphere") {
        if (std::isnan(o.rho)) throw Failure{kExitUsage, "sphere needs --rho"};
        echo.add("rho", o.rho);
        check(pf_state_sphere_json(n, c, o.rho, &js.p), "initial state");
    } else if (o.family == "product") {
        if (std::isnan(o.lambda) == std::isnan(o.r1sq)) {
            throw Failure{kExitUsage, "product needs exactly one of --lambda and --r1sq"};
        }
        if (!std::isnan(o.lambda)) {
            echo.add("lambda", o.lambda);
            check(pf_state_product_json(n, c, o.lambda, &js.p), "initial state");
        } else {
            echo.add("r1sq", o.r1sq);
            check(pf_state_product_r1sq_json(n, c, o.r1sq, &js.p), "initial state");
        }
    } else if (o.family == "axisymmetric") {
        echo.add("profile", o.profile).add("amp", o.amp).add("mode", o.mode).add("grid", o.grid);
        if (o.profile == "latitude") {
            echo.add("phi0", o.phi0);
            check(pf_state_latitude_json(n, c, o.phi0, o.amp, o.mode, o.grid, &js.p), "initial state");
        } else {
            echo.add("radius", o.radius);
            check(pf_state_cap_json(n, c, o.radius, o.amp, o.mode, o.grid, &js.p), "initial state");
        }
    } else {
        throw Failure{kExitUsage, "simulate needs --family or --state"};
    }
    return js.str();
}

int run_simulate(SimulateOpts& o) {
    require_format(o.common, "csv", "simulate");
    Echo echo("simulate");
    echo.add("n", o.common.n).add("c", o.common.c);
    const std::string state = initial_state(o, echo);
    pf_flow_config cfg = o.flow;
    if (!std::isnan(o.epsilon)) {
        cfg.has_epsilon = 1;
        cfg.epsilon = o.epsilon;
        echo.add("epsilon", o.epsilon);
    }
    if (!std::isnan(o.eta)) {
        cfg.has_eta = 1;
        cfg.eta = o.eta;
        echo.add("eta", o.eta);
    }
    if (!std::isnan(o.h2_halt)) {
        cfg.has_h2_halt = 1;
        cfg.h2_halt = o.h2_halt;
        echo.add("h2_halt", o.h2_halt);
    }
    cfg.exact = o.exact;
    echo.add("sigma", cfg.sigma).add("t_max", cfg.t_max).add("tol", cfg.tol).add("dt_initial", cfg.dt_initial);
    echo.add("dt_min", cfg.dt_min).add("dt_max", cfg.dt_max).add("stride", static_cast<int>(cfg.record_stride));
    echo.add("exact", o.exact ? "yes" : "no");
    pf_provenance prov = echo.view();

    if (!o.curvature_out.empty()) {
        CString k;
        check(pf_state_curvature_csv(state.c_str(), o.common.n, o.common.c, &prov, &k.p), "curvature");
        emit(o.curvature_out, k.str());
    }
    pf_trace* raw = nullptr;
    check(pf_simulate(state.c_str(), o.common.n, o.common.c, &cfg, &raw), "simulate");
    std::unique_ptr<pf_trace, decltype(&pf_trace_destroy)> trace(raw, pf_trace_destroy);
    CString csv, summary;
    check(pf_trace_csv(trace.get(), &prov, &csv.p), "simulate");
    check(pf_trace_summary_json(trace.get(), &prov, &summary.p), "simulate");
    if (o.common.out == "-" && o.summary == "-") {
        throw Failure{kExitUsage, "trace and summary cannot both go to stdout; set --out or --summary"};
    }
    emit(o.common.out, csv.str());
    if (!o.summary.empty()) {
        emit(o.summary, summary.str());
    } else if (o.common.out == "-") {
        std::cerr << summary.str();
    } else {
        std::cout << summary.str();
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pinching thresholds and mean curvature flow in spherical space forms"};
    app.set_version_flag("--version", std::string("pinchflow ") + pf_version());
    app.require_subcommand(1, 1);

    ThresholdOpts th;
    CLI::App* thresholds = app.add_subcommand("thresholds", "tabulate alpha, beta, gamma and omega as CSV");
    add_common(thresholds, th.common);
    thresholds->add_option("--x", th.xs, "evaluation points (repeatable); default a linear table");
    thresholds->add_option("--x-min", th.x_min, "table start")->capture_default_str();
    thresholds->add_option("--x-max", th.x_max, "table end")->capture_default_str();
    thresholds->add_option("--points", th.points, "table size")->capture_default_str();

    Common co;
    CLI::App* constants = app.add_subcommand("constants", "critical constants y_n, x0, x1, k_n as JSON");
    add_common(constants, co);

    VerifyOpts ve;
    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("-o,--out", ve.common.out, "JSON report path, - for stdout")->capture_default_str();
    verify->add_option("--format", ve.common.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    verify->add_option("--dims", ve.dims, "dimensions n")->delimiter(',')->capture_default_str();
    verify->add_option("--curvatures", ve.curvatures, "curvatures c")->delimiter(',')->capture_default_str();
    verify->add_option("--log-points", ve.log_points, "grid points below c")->capture_default_str();
    verify->add_option("--linear-points", ve.linear_points, "grid points on [c, 100c]")->capture_default_str();
    verify->add_option("--seed", ve.seed, "random seed")->capture_default_str();
    verify->add_option("--okumura-samples", ve.okumura, "random multisets per n")->capture_default_str();
    verify->add_flag("--no-flows", ve.no_flows, "skip the flow oracles");
    verify->add_option("--threads", ve.threads, "worker threads (0: PINCHFLOW_THREADS or all cores)");
    verify->add_flag("-q,--quiet", ve.quiet, "suppress the table");

    SimulateOpts si;
    pf_flow_config_default(&si.flow);
    CLI::App* simulate = app.add_subcommand("simulate", "run the flow and write its trace");
    add_common(simulate, si.common);
    simulate->add_option("--family", si.family, "initial family")->check(CLI::IsMember({"sphere", "product", "axisymmetric"}));
    simulate->add_option("--state", si.state_file, "initial state JSON file instead of --family");
    simulate->add_option("--rho", si.rho, "sphere: geodesic radius");
    simulate->add_option("--lambda", si.lambda, "product: principal curvature of the S^{n-1} factor");
    simulate->add_option("--r1sq", si.r1sq, "product: squared radius of the S^{n-1} factor");
    simulate->add_option("--profile", si.profile, "axisymmetric: latitude (torus) or cap (sphere)")
        ->check(CLI::IsMember({"latitude", "cap"}))
        ->capture_default_str();
    simulate->add_option("--phi0", si.phi0, "latitude: polar angle")->capture_default_str();
    simulate->add_option("--radius", si.radius, "cap: angular radius")->capture_default_str();
    simulate->add_option("--amp", si.amp, "relative perturbation")->capture_default_str();
    simulate->add_option("--mode", si.mode, "perturbation mode")->capture_default_str();
    simulate->add_option("--grid", si.grid, "profile samples")->capture_default_str();
    simulate->add_option("--epsilon", si.epsilon, "pinching slack (default: half the initial slack)");
    simulate->add_option("--sigma", si.flow.sigma, "decay exponent in (0, 1)")->capture_default_str();
    simulate->add_option("--eta", si.eta, "gradient parameter in (0, 1/n), default 1/(2n)");
    simulate->add_option("--t-max", si.flow.t_max, "horizon")->capture_default_str();
    simulate->add_option("--tol", si.flow.tol, "integrator tolerance")->capture_default_str();
    simulate->add_option("--dt-initial", si.flow.dt_initial, "first step")->capture_default_str();
    simulate->add_option("--dt-min", si.flow.dt_min, "smallest step")->capture_default_str();
    simulate->add_option("--dt-max", si.flow.dt_max, "largest step");
    simulate->add_option("--h2-halt", si.h2_halt, "profiles: stop once |h|^2 exceeds this (default 1e6 c)");
    simulate->add_option("--stride", si.flow.record_stride, "keep every k-th state")->capture_default_str();
    simulate->add_flag("--exact", si.exact, "product: sample the closed-form solution");
    simulate->add_option("--samples", si.flow.exact_samples, "--exact: number of samples")->capture_default_str();
    simulate->add_option("--summary", si.summary, "terminal event JSON path, - for stdout (default: stdout, or stderr when the trace is on stdout)");
    simulate->add_option("--curvature-out", si.curvature_out, "write the initial curvature report CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*thresholds) return run_thresholds(th);
        if (*constants) return run_constants(co);
        if (*verify) return run_verify(ve);
        return run_simulate(si);
    } catch (const Failure& f) {
        std::cerr << "pinchflow: " << f.message << "\n";
        if (f.exit_code == kExitUsage) std::cerr << app.help() << "\n";
        return f.exit_code;
    }
}
