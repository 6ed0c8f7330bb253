#include "pinchflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pinchflow/error.hpp"

namespace pinchflow {

using json = nlohmann::ordered_json;

namespace {

void csv_header(std::ostream& out, const Provenance& prov) {
    out << "# pinchflow " << PINCHFLOW_VERSION << "\n";
    out << "# command: " << prov.command << "\n";
    for (const auto& [k, v] : prov.config) out << "# " << k << " = " << v << "\n";
}

json metadata(const Provenance& prov) {
    json cfg = json::object();
    for (const auto& [k, v] : prov.config) cfg[k] = v;
    return json{{"tool", "pinchflow"}, {"version", PINCHFLOW_VERSION}, {"command", prov.command}, {"config", cfg}};
}

// JSON has no infinities or NaN; those become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        fail(ErrorCode::IoError, std::string("state file needs a numeric \"") + key + "\"");
    }
    return j.at(key).get<double>();
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_threshold_csv(std::ostream& out, const Thresholds& t, const std::vector<double>& xs,
                         const Provenance& prov) {
    csv_header(out, prov);
    out << "n,c,x,alpha,beta,gamma,gamma_d1,gamma_d2,omega,branch\n";
    for (double x : xs) {
        const ThresholdBundle b = t.evaluate(x);
        out << t.n() << ',' << format_double(t.c()) << ',' << format_double(x) << ',' << format_double(b.alpha) << ','
            << format_double(b.beta) << ',' << format_double(b.gamma) << ',' << format_double(b.gamma_d1) << ','
            << format_double(b.gamma_d2) << ',' << format_double(b.omega) << ','
            << (b.active_branch == Branch::Alpha ? "alpha" : "beta") << '\n';
    }
}

std::string constants_json(const Thresholds& t, const Provenance& prov) {
    const CriticalConstants& k = t.constants();
    json j;
    j["metadata"] = metadata(prov);
    j["n"] = t.n();
    j["c"] = t.c();
    j["y_n"] = k.y_n;
    j["x0"] = k.x0;
    j["x1"] = k.x1;
    j["k_n"] = k.k_n;
    j["k_n_branch"] = to_string(k.k_n_branch);
    j["bneq_residual"] = k.bneq_residual;
    return j.dump(2) + "\n";
}

void write_curvature_csv(std::ostream& out, const StateCurvature& k, const Thresholds& t, const Provenance& prov) {
    csv_header(out, prov);
    out << "s,H,h2,h0_2,gamma,margin\n";
    for (std::size_t i = 0; i < k.samples.size(); ++i) {
        const CurvatureData& d = k.samples[i];
        const double g = t.gamma(d.H * d.H).value;
        out << format_double(k.s[i]) << ',' << format_double(d.H) << ',' << format_double(d.h_norm2) << ','
            << format_double(d.h0_norm2) << ',' << format_double(g) << ',' << format_double(g - d.h_norm2) << '\n';
    }
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace, const Provenance& prov) {
    csv_header(out, prov);
    out << "t,family,param,H_max,h2_max,h0_2_max,gamma_min,U_max,f_sigma,g_sigma\n";
    for (const MonitorRecord& m : trace.monitors) {
        out << format_double(m.t) << ',' << trace.family << ',' << format_double(m.param) << ','
            << format_double(m.H_max) << ',' << format_double(m.h2_max) << ',' << format_double(m.h0_2_max) << ','
            << format_double(m.gamma_min) << ',' << format_double(m.U_max) << ',' << format_double(m.f_sigma) << ','
            << format_double(m.g_sigma) << '\n';
    }
}

std::string trace_summary_json(const FlowTrace& trace, const Provenance& prov) {
    json j;
    j["metadata"] = metadata(prov);
    j["terminal"] = to_string(trace.terminal.kind);
    j["T"] = number(trace.terminal.T);
    j["t_last"] = number(trace.terminal.t);
    j["family"] = trace.family;
    j["n"] = trace.params.n;
    j["c"] = trace.params.c;
    j["epsilon"] = number(trace.epsilon);
    j["sigma"] = number(trace.sigma);
    j["eta"] = number(trace.eta);
    j["accepted_steps"] = trace.accepted_steps;
    j["rejected_steps"] = trace.rejected_steps;
    if (!trace.monitors.empty()) {
        const MonitorRecord& last = trace.monitors.back();
        double U = -INFINITY;
        for (const MonitorRecord& m : trace.monitors) U = std::max(U, m.U_max);
        j["U_max_overall"] = number(U);
        j["C0"] = number(last.C0);
        j["C_eta"] = number(last.C_eta);
    }
    return j.dump(2) + "\n";
}

std::string reports_json(const std::vector<CheckReport>& reports, const Provenance& prov) {
    json arr = json::array();
    for (const CheckReport& r : reports) {
        json loci = json::array();
        for (const Interval& i : r.equality_loci) loci.push_back({number(i.lo), number(i.hi)});
        arr.push_back({{"check_id", r.check_id},
                       {"n", r.n},
                       {"c", r.c},
                       {"grid_size", r.grid_size},
                       {"worst_margin", number(r.worst_margin)},
                       {"worst_x", number(r.worst_x)},
                       {"passed", r.passed},
                       {"equality_loci", loci},
                       {"detail", r.detail}});
    }
    json j;
    j["metadata"] = metadata(prov);
    j["reports"] = arr;
    return j.dump(2) + "\n";
}

std::string reports_table(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    os << std::left << std::setw(22) << "check" << std::setw(5) << "n" << std::setw(7) << "c" << std::setw(6)
       << "pass" << std::setw(14) << "worst_margin" << "worst_x\n";
    std::size_t failed = 0;
    for (const CheckReport& r : reports) {
        char line[160];
        std::snprintf(line, sizeof line, "%-22s%-5d%-7g%-6s%-14.4g%.6g", r.check_id.c_str(), r.n, r.c,
                      r.passed ? "ok" : "FAIL", r.worst_margin, r.worst_x);
        os << line;
        if (!r.passed) {
            ++failed;
            os << "  " << r.detail;
        }
        os << '\n';
    }
    os << reports.size() - failed << " of " << reports.size() << " checks passed\n";
    return os.str();
}

StateFile parse_state_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::IoError, std::string("state file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
        fail(ErrorCode::IoError, "state file needs a string \"family\"");
    }
    StateFile out;
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer()) fail(ErrorCode::IoError, "\"n\" must be an integer");
        out.n = j.at("n").get<int>();
    }
    if (j.contains("c")) out.c = get_number(j, "c");
    const std::string family = j.at("family").get<std::string>();
    if (family == "sphere") {
        out.state = GeodesicSphere{get_number(j, "rho")};
    } else if (family == "product") {
        if (j.contains("lambda")) {
            out.state = ProductSn1S1{get_number(j, "lambda")};
        } else {
            const double r1sq = get_number(j, "r1sq");
            out.state = product_from_r1sq(r1sq, out.c.value_or(1.0));
        }
    } else if (family == "axisymmetric") {
        Axisymmetric a;
        if (!j.contains("profile") || !j.at("profile").is_array()) {
            fail(ErrorCode::IoError, "axisymmetric state needs a \"profile\" array of [phi, xi] pairs");
        }
        for (const json& p : j.at("profile")) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                fail(ErrorCode::IoError, "profile entries must be [phi, xi] number pairs");
            }
            a.profile.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        if (j.contains("topology")) {
            const std::string topo = j.at("topology").get<std::string>();
            if (topo == "torus") {
                a.topology = ProfileTopology::Torus;
            } else if (topo == "sphere") {
                a.topology = ProfileTopology::Sphere;
            } else {
                fail(ErrorCode::IoError, "topology must be \"torus\" or \"sphere\"");
            }
        }
        if (j.contains("grid_size")) {
            if (!j.at("grid_size").is_number_integer()) fail(ErrorCode::IoError, "\"grid_size\" must be an integer");
            a.grid_size = j.at("grid_size").get<int>();
        }
        out.state = std::move(a);
    } else {
        fail(ErrorCode::IoError, "unknown family \"" + family + "\" (expected sphere, product or axisymmetric)");
    }
    return out;
}

std::string state_json(const HypersurfaceState& state, const PinchingParams& p) {
    json j;
    if (const auto* s = std::get_if<GeodesicSphere>(&state)) {
        j = {{"family", "sphere"}, {"n", p.n}, {"c", p.c}, {"rho", s->rho}};
    } else if (const auto* q = std::get_if<ProductSn1S1>(&state)) {
        j = {{"family", "product"}, {"n", p.n}, {"c", p.c}, {"lambda", q->lambda}};
    } else {
        const Axisymmetric& a = std::get<Axisymmetric>(state);
        json prof = json::array();
        for (const auto& pt : a.profile) prof.push_back({pt[0], pt[1]});
        j = {{"family", "axisymmetric"}, {"n", p.n},           {"c", p.c},
             {"topology", to_string(a.topology)}, {"grid_size", a.grid_size}, {"profile", prof}};
    }
    return j.dump() + "\n";
}

} // namespace pinchflow
