#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pinchflow/flow.hpp"
#include "pinchflow/verify.hpp"

namespace pinchflow {

/// Config echo written in front of every output: CSV comment lines or a
/// "metadata" object in JSON.
struct Provenance {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
};

/// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);

void write_threshold_csv(std::ostream& out, const Thresholds& t, const std::vector<double>& xs,
                         const Provenance& prov);
std::string constants_json(const Thresholds& t, const Provenance& prov);

void write_curvature_csv(std::ostream& out, const StateCurvature& k, const Thresholds& t, const Provenance& prov);

void write_trace_csv(std::ostream& out, const FlowTrace& trace, const Provenance& prov);
/// Terminal event plus run configuration.
std::string trace_summary_json(const FlowTrace& trace, const Provenance& prov);

std::string reports_json(const std::vector<CheckReport>& reports, const Provenance& prov);
std::string reports_table(const std::vector<CheckReport>& reports);

struct StateFile {
    HypersurfaceState state;
    std::optional<int> n;
    std::optional<double> c;
};

/// Families: {"family":"sphere","rho":..}, {"family":"product","lambda":..}
/// or "r1sq", {"family":"axisymmetric","profile":[[phi,xi],..],
/// "topology":"torus"|"sphere","grid_size":N}. n and c are optional.
StateFile parse_state_json(const std::string& text);
std::string state_json(const HypersurfaceState& state, const PinchingParams& p);

} // namespace pinchflow
