#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "pinchflow/error.hpp"
#include "pinchflow/io.hpp"
#include "pinchflow/profile.hpp"

using namespace pinchflow;
using nlohmann::json;

namespace {

const Provenance kProv{"pinchflow test", {{"n", "4"}, {"c", "1"}}};

ErrorCode parse_code(const std::string& text) {
    try {
        parse_state_json(text);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::CheckFailure;
}

} // namespace

TEST_CASE("doubles round-trip through text") {
    for (double v : {0.1, 1.0 / 3.0, 2.661422176250221, 1e-300, -7.25e17}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("state files for every family") {
    const StateFile s = parse_state_json(R"({"family":"sphere","rho":0.8,"n":5,"c":2.0})");
    CHECK(std::get<GeodesicSphere>(s.state).rho == 0.8);
    CHECK(s.n == 5);
    CHECK(s.c == 2.0);

    const StateFile p = parse_state_json(R"({"family":"product","r1sq":0.75})");
    CHECK(product_r1sq(std::get<ProductSn1S1>(p.state), 1.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_FALSE(p.n.has_value());

    const StateFile a = parse_state_json(
        R"({"family":"axisymmetric","profile":[[0.5,0],[0.5,2],[0.5,4]],"topology":"torus","grid_size":32})");
    const Axisymmetric& ax = std::get<Axisymmetric>(a.state);
    CHECK(ax.profile.size() == 3);
    CHECK(ax.grid_size == 32);
    CHECK(ax.topology == ProfileTopology::Torus);
}

TEST_CASE("malformed state files") {
    CHECK(parse_code("{") == ErrorCode::IoError);
    CHECK(parse_code("[]") == ErrorCode::IoError);
    CHECK(parse_code(R"({"family":"cube"})") == ErrorCode::IoError);
    CHECK(parse_code(R"({"family":"sphere"})") == ErrorCode::IoError);
    CHECK(parse_code(R"({"family":"sphere","rho":"x"})") == ErrorCode::IoError);
    CHECK(parse_code(R"({"family":"sphere","rho":1,"n":3.5})") == ErrorCode::IoError);
    CHECK(parse_code(R"({"family":"axisymmetric","profile":[[1,2,3]]})") == ErrorCode::IoError);
    CHECK(parse_code(R"({"family":"axisymmetric","profile":[[1,2]],"topology":"knot"})") == ErrorCode::IoError);
}

TEST_CASE("state_json round-trips") {
    const PinchingParams p = PinchingParams::make(4, 1.0);
    const HypersurfaceState states[] = {GeodesicSphere{1.1}, ProductSn1S1{0.7}, cap_profile(0.9, 16)};
    for (const HypersurfaceState& s : states) {
        const StateFile back = parse_state_json(state_json(s, p));
        CHECK(back.state.index() == s.index());
        CHECK(state_json(back.state, p) == state_json(s, p));
    }
}

TEST_CASE("threshold CSV carries provenance and a fixed header") {
    const Thresholds t(PinchingParams::make(4, 1.0));
    std::ostringstream os;
    write_threshold_csv(os, t, {0.0, 1.0, t.x0()}, kProv);
    std::istringstream is(os.str());
    std::string line;
    int comments = 0;
    while (std::getline(is, line) && line.rfind('#', 0) == 0) ++comments;
    CHECK(comments >= 3);
    CHECK(line == "n,c,x,alpha,beta,gamma,gamma_d1,gamma_d2,omega,branch");
    int rows = 0;
    std::string last;
    while (std::getline(is, line)) {
        ++rows;
        last = line;
    }
    CHECK(rows == 3);
    CHECK(last.substr(last.size() - 6) == ",alpha");
}

TEST_CASE("constants JSON") {
    const Thresholds t(PinchingParams::make(10, 1.0));
    const json j = json::parse(constants_json(t, kProv));
    CHECK(j.at("y_n").get<double>() == 12.0);
    CHECK(j.at("k_n_branch") == "vertex");
    CHECK(j.at("metadata").at("command") == "pinchflow test");
}

TEST_CASE("reports JSON keeps order and fields") {
    CheckReport a;
    a.check_id = "x";
    a.n = 3;
    a.c = 1.0;
    a.passed = true;
    a.equality_loci = {{1.0, 2.0}};
    CheckReport b = a;
    b.check_id = "y";
    b.passed = false;
    const json j = json::parse(reports_json({a, b}, kProv));
    REQUIRE(j.at("reports").size() == 2);
    CHECK(j.at("reports")[0].at("check_id") == "x");
    CHECK(j.at("reports")[1].at("passed") == false);
    CHECK(j.at("reports")[0].at("equality_loci")[0][1] == 2.0);
    CHECK(reports_table({a, b}).find("FAIL") != std::string::npos);
}

TEST_CASE("trace summary") {
    const PinchingParams p = PinchingParams::make(10, 1.0);
    FlowConfig f;
    f.exact_samples = 10;
    const FlowTrace tr = flow_product_exact(product_from_r1sq(0.75, 1.0), p, f);
    const json j = json::parse(trace_summary_json(tr, kProv));
    CHECK(j.at("terminal") == "GreatCircleCollapse");
    CHECK(j.at("T").get<double>() == doctest::Approx(std::log(6.0) / 20.0).epsilon(1e-15));
    std::ostringstream os;
    write_trace_csv(os, tr, kProv);
    CHECK(os.str().find("t,family,param,H_max,h2_max,h0_2_max,gamma_min,U_max,f_sigma,g_sigma\n") != std::string::npos);
}
