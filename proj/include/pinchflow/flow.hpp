#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pinchflow/geometry.hpp"

namespace pinchflow {

struct FlowConfig {
    std::optional<double> epsilon; // default: half the initial slack, see resolve_epsilon
    double sigma = 0.1;
    std::optional<double> eta;     // default 1/(2n)
    double dt_initial = 1e-4;
    double dt_min = 1e-14;
    double dt_max = std::numeric_limits<double>::infinity();
    double t_max = 10.0;
    double tol = 1e-10;
    std::optional<double> h2_halt; // default 1e6 c
    int grid_size = 0;             // profile resolution; 0 keeps the input size
    std::size_t record_stride = 1; // keep every k-th accepted state
    std::size_t exact_samples = 201;

    /// Throws InvalidArgument for values outside the admissible ranges.
    void validate(const PinchingParams& p) const;
};

enum class TerminalKind { RoundPoint, TotallyGeodesic, GreatCircleCollapse, HorizonReached, Blowup };

const char* to_string(TerminalKind kind) noexcept;

struct TerminalEvent {
    TerminalKind kind = TerminalKind::HorizonReached;
    double t = 0.0; // time of the last accepted state
    double T = 0.0; // collapse time for RoundPoint / GreatCircleCollapse, else t
};

struct MonitorRecord {
    double t = 0.0;
    double param = 0.0; // rho, r1^2 or max u depending on the family
    double H_max = 0.0; // max |H|
    double h2_max = 0.0;
    double h0_2_max = 0.0;
    double gamma_min = 0.0;
    double U_max = 0.0;
    double f_sigma = 0.0;
    double g_sigma = 0.0;
    double C0 = 0.0; // running fit of the traceless decay bound
    // Profiles only; NaN for the homogeneous families.
    double grad_H2_max = std::numeric_limits<double>::quiet_NaN();
    double C_eta = std::numeric_limits<double>::quiet_NaN();
};

struct TraceSample {
    double t = 0.0;
    HypersurfaceState state;
};

struct FlowTrace {
    std::string family;
    PinchingParams params;
    double epsilon = 0.0;
    double sigma = 0.0;
    double eta = 0.0;
    std::vector<TraceSample> samples;
    std::vector<MonitorRecord> monitors;
    TerminalEvent terminal;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

/// Running state of the monitors along one trajectory.
class MonitorState {
public:
    MonitorState(const Thresholds& thresholds, double epsilon, double sigma, double eta);

    MonitorRecord update(const StateCurvature& curvature, double t, double param);

    double epsilon() const noexcept { return epsilon_; }

private:
    const Thresholds& thresholds_;
    double epsilon_;
    double sigma_;
    double eta_;
    double C0_ = 0.0;
    double C_eta_ = 0.0;
};

MonitorRecord monitors_update(MonitorState& state, const StateCurvature& curvature, double t, double param);

/// 0.5 * min (gamma - |h|^2) / omega over the samples, or 0 when some sample
/// is not strictly pinched.
double resolve_epsilon(const StateCurvature& curvature, const Thresholds& t);

struct ProductCollapse {
    double d = 0.0;
    double T = 0.0;
};

ProductCollapse product_collapse(const PinchingParams& p, double r1sq0);
double product_exact_r1sq(const PinchingParams& p, double r1sq0, double t);

FlowTrace flow_product_exact(const ProductSn1S1& initial, const PinchingParams& p, const FlowConfig& config);
FlowTrace flow_ode_numeric(const HypersurfaceState& initial, const PinchingParams& p, const FlowConfig& config);
FlowTrace flow_axisymmetric(const Axisymmetric& initial, const PinchingParams& p, const FlowConfig& config);

/// Dispatches to the numeric integrators by family.
FlowTrace simulate(const HypersurfaceState& initial, const PinchingParams& p, const FlowConfig& config);

/// Scalar parameter used in traces: rho, r1^2 or max u.
double state_param(const HypersurfaceState& state, const PinchingParams& p);

} // namespace pinchflow
