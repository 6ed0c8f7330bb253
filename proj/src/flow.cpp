#include "pinchflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pinchflow/error.hpp"
#include "pinchflow/ode.hpp"
#include "pinchflow/profile.hpp"

namespace pinchflow {

const char* to_string(TerminalKind kind) noexcept {
    switch (kind) {
    case TerminalKind::RoundPoint: return "RoundPoint";
    case TerminalKind::TotallyGeodesic: return "TotallyGeodesic";
    case TerminalKind::GreatCircleCollapse: return "GreatCircleCollapse";
    case TerminalKind::HorizonReached: return "HorizonReached";
    case TerminalKind::Blowup: return "Blowup";
    }
    return "Unknown";
}

void FlowConfig::validate(const PinchingParams& p) const {
    auto bad = [](const std::string& what) { fail(ErrorCode::InvalidArgument, what); };
    if (epsilon && !(*epsilon >= 0.0 && std::isfinite(*epsilon))) bad("epsilon must be finite and nonnegative");
    if (!(sigma > 0.0 && sigma < 1.0)) bad("sigma must lie in (0, 1)");
    if (eta && !(*eta > 0.0 && *eta < 1.0 / p.n)) bad("eta must lie in (0, 1/n)");
    if (!(dt_initial > 0.0)) bad("dt_initial must be positive");
    if (!(dt_min > 0.0) || dt_min > dt_initial) bad("dt_min must be positive and at most dt_initial");
    if (!(dt_max > 0.0)) bad("dt_max must be positive");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) bad("t_max must be positive and finite");
    if (!(tol > 0.0 && tol < 1.0)) bad("tol must lie in (0, 1)");
    if (h2_halt && !(*h2_halt > 0.0)) bad("h2_halt must be positive");
    if (grid_size < 0 || (grid_size > 0 && grid_size < 8)) bad("grid_size must be 0 or at least 8");
    if (record_stride == 0) bad("record_stride must be at least 1");
    if (exact_samples < 2) bad("exact_samples must be at least 2");
}

MonitorState::MonitorState(const Thresholds& thresholds, double epsilon, double sigma, double eta)
    : thresholds_(thresholds), epsilon_(epsilon), sigma_(sigma), eta_(eta) {}

MonitorRecord MonitorState::update(const StateCurvature& curvature, double t, double param) {
    const int n = thresholds_.n();
    const double c = thresholds_.c();
    MonitorRecord r;
    r.t = t;
    r.param = param;
    r.gamma_min = INFINITY;
    r.U_max = -INFINITY;
    const double decay = std::exp(2.0 * sigma_ * c * t);
    const bool profile = !curvature.grad_H2.empty();
    if (profile) r.grad_H2_max = 0.0;
    for (std::size_t i = 0; i < curvature.samples.size(); ++i) {
        const CurvatureData& d = curvature.samples[i];
        const double x = d.H * d.H;
        const double gamma = thresholds_.gamma(x).value;
        const double omega = thresholds_.omega(x).value;
        const double gamma_ring = gamma - x / n;
        if (!(gamma_ring > 0.0)) {
            std::ostringstream os;
            os << "gamma - H^2/n = " << gamma_ring << " is not positive at H^2 = " << x;
            fail(ErrorCode::DegenerateGamma, os.str());
        }
        r.H_max = std::max(r.H_max, std::abs(d.H));
        r.h2_max = std::max(r.h2_max, d.h_norm2);
        r.h0_2_max = std::max(r.h0_2_max, d.h0_norm2);
        r.gamma_min = std::min(r.gamma_min, gamma);
        r.U_max = std::max(r.U_max, d.h_norm2 - gamma + epsilon_ * omega);
        r.f_sigma = std::max(r.f_sigma, d.h0_norm2 / std::pow(gamma_ring, 1.0 - sigma_));
        C0_ = std::max(C0_, d.h0_norm2 * decay / std::pow(x + c, 1.0 - sigma_));
        if (profile) {
            const double g2 = curvature.grad_H2[i];
            r.grad_H2_max = std::max(r.grad_H2_max, g2);
            const double eH = eta_ * d.H;
            const double excess = g2 * std::exp(sigma_ * c * t) - eH * eH * eH * eH;
            C_eta_ = std::max(C_eta_, std::sqrt(std::max(0.0, excess)));
        }
    }
    r.g_sigma = r.f_sigma * decay;
    r.C0 = C0_;
    if (profile) r.C_eta = C_eta_;
    return r;
}

MonitorRecord monitors_update(MonitorState& state, const StateCurvature& curvature, double t, double param) {
    return state.update(curvature, t, param);
}

double resolve_epsilon(const StateCurvature& curvature, const Thresholds& t) {
    double ratio = INFINITY;
    for (const CurvatureData& d : curvature.samples) {
        const double x = d.H * d.H;
        const double slack = t.gamma(x).value - d.h_norm2;
        if (!(slack > kWeakEqualityTolerance * (x + t.c()))) return 0.0;
        ratio = std::min(ratio, slack / t.omega(x).value);
    }
    return std::isfinite(ratio) ? 0.5 * ratio : 0.0;
}

namespace {

double minimal_r1sq(const PinchingParams& p) { return (p.n - 1.0) / (p.n * p.c); }

// Rounding in lambda <-> r1^2 conversions must not push the minimal torus off
// its (unstable) fixed point.
bool is_minimal(const PinchingParams& p, double r1sq) {
    return std::abs(r1sq - minimal_r1sq(p)) <= 1e-14 * minimal_r1sq(p);
}

struct Setup {
    Thresholds thresholds;
    double epsilon;
    double sigma;
    double eta;
    double h2_halt;
};

Setup make_setup(const PinchingParams& p, const FlowConfig& config, const StateCurvature& initial) {
    config.validate(p);
    Thresholds thresholds(p);
    const double epsilon = config.epsilon ? *config.epsilon : resolve_epsilon(initial, thresholds);
    return Setup{std::move(thresholds), epsilon, config.sigma, config.eta ? *config.eta : 1.0 / (2.0 * p.n),
                 config.h2_halt ? *config.h2_halt : 1e6 * p.c};
}

FlowTrace start_trace(const std::string& family, const PinchingParams& p, const Setup& s) {
    FlowTrace trace;
    trace.family = family;
    trace.params = p;
    trace.epsilon = s.epsilon;
    trace.sigma = s.sigma;
    trace.eta = s.eta;
    return trace;
}

// Tracks how long max |h|^2 has stayed below the totally geodesic threshold.
class GeodesicWatch {
public:
    explicit GeodesicWatch(const PinchingParams& p) : hold_(1.0 / (p.n * p.c)), level_(1e-12 * p.c) {}

    bool quiet(double h2_max, double t) {
        if (h2_max < level_) {
            if (std::isnan(since_)) since_ = t;
        } else {
            since_ = NAN;
        }
        return !std::isnan(since_);
    }
    bool held(double t) const { return !std::isnan(since_) && t - since_ >= hold_; }

private:
    double hold_;
    double level_;
    double since_ = NAN;
};

OdeOptions ode_options(const FlowConfig& config) {
    OdeOptions o;
    o.rtol = config.tol;
    o.atol = config.tol;
    o.dt_initial = std::min(config.dt_initial, config.t_max);
    o.dt_min = config.dt_min;
    o.dt_max = config.dt_max;
    return o;
}

// Newton iteration on re-integrations from the start of the last step, so the
// event time carries the integrator's accuracy rather than an extrapolation.
double locate_event(const OdeRhs& rhs, const OdeOptions& options, const AcceptedStep& step, double target) {
    const double f_end = (*step.dy)[0];
    double t = step.t + (target - (*step.y)[0]) / f_end;
    OdeState dy(1);
    for (int it = 0; it < 12; ++it) {
        OdeOptions o = options;
        o.dt_initial = std::max(std::abs(t - step.t_prev), options.dt_min);
        const OdeResult r = integrate_dopri5(rhs, step.t_prev, *step.y_prev, std::max(t, step.t_prev), o);
        rhs(r.t, r.y, dy);
        const double dt = (target - r.y[0]) / dy[0];
        t += dt;
        if (std::abs(dt) <= 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    return t;
}

// z -> sqrt(z) cot(sqrt(z)), continued analytically to z <= 0.
double x_cot_x(double z) {
    if (std::abs(z) < 1e-8) return 1.0 - z / 3.0;
    if (z > 0.0) {
        const double r = std::sqrt(z);
        return r / std::tan(r);
    }
    const double r = std::sqrt(-z);
    return r / std::tanh(r);
}

HypersurfaceState homogeneous_state(bool sphere, double y, double c) {
    if (sphere) return GeodesicSphere{y};
    return ProductSn1S1{std::sqrt(1.0 / y - c)};
}

} // namespace

double state_param(const HypersurfaceState& state, const PinchingParams& p) {
    if (const auto* sphere = std::get_if<GeodesicSphere>(&state)) return sphere->rho;
    if (const auto* product = std::get_if<ProductSn1S1>(&state)) return product_r1sq(*product, p.c);
    return max_u(to_curve(std::get<Axisymmetric>(state)));
}

ProductCollapse product_collapse(const PinchingParams& p, double r1sq0) {
    const double A = minimal_r1sq(p);
    if (!(r1sq0 > 0.0)) fail(ErrorCode::DomainError, "r1^2 must be positive");
    if (is_minimal(p, r1sq0)) {
        fail(ErrorCode::FixedPoint, "the minimal product torus r1^2 = (n-1)/(nc) is stationary");
    }
    if (r1sq0 > A) {
        std::ostringstream os;
        os << "r1^2 = " << r1sq0 << " exceeds (n-1)/(nc) = " << A << "; the closed form collapses only below it";
        fail(ErrorCode::DomainError, os.str());
    }
    ProductCollapse out;
    out.d = 1.0 - r1sq0 / A;
    out.T = -std::log(out.d) / (2.0 * p.n * p.c);
    return out;
}

double product_exact_r1sq(const PinchingParams& p, double r1sq0, double t) {
    const ProductCollapse pc = product_collapse(p, r1sq0);
    return minimal_r1sq(p) * (1.0 - pc.d * std::exp(2.0 * p.n * p.c * t));
}

FlowTrace flow_product_exact(const ProductSn1S1& initial, const PinchingParams& p, const FlowConfig& config) {
    validate_state(initial, p);
    const double r0 = product_r1sq(initial, p.c);
    const ProductCollapse pc = product_collapse(p, r0);
    const Setup s = make_setup(p, config, curvature_of(initial, p));
    FlowTrace trace = start_trace("product", p, s);
    MonitorState monitors(s.thresholds, s.epsilon, s.sigma, s.eta);

    const bool collapses = pc.T <= config.t_max;
    const double t_end = collapses ? pc.T : config.t_max;
    // The collapse instant itself is singular; sample [0, T) and report T.
    const std::size_t count = config.exact_samples;
    const double dt = collapses ? t_end / static_cast<double>(count) : t_end / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = dt * static_cast<double>(k);
        const double r1sq = minimal_r1sq(p) * (1.0 - pc.d * std::exp(2.0 * p.n * p.c * t));
        const HypersurfaceState state = ProductSn1S1{std::sqrt(1.0 / r1sq - p.c)};
        trace.monitors.push_back(monitors.update(curvature_of(state, p), t, r1sq));
        if (k % config.record_stride == 0) trace.samples.push_back({t, state});
    }
    trace.terminal.t = trace.monitors.back().t;
    if (collapses) {
        trace.terminal.kind = TerminalKind::GreatCircleCollapse;
        trace.terminal.T = pc.T;
    } else {
        trace.terminal.kind = TerminalKind::HorizonReached;
        trace.terminal.T = t_end;
    }
    return trace;
}

FlowTrace flow_ode_numeric(const HypersurfaceState& initial, const PinchingParams& p, const FlowConfig& config) {
    const bool sphere = std::holds_alternative<GeodesicSphere>(initial);
    if (!sphere && !std::holds_alternative<ProductSn1S1>(initial)) {
        fail(ErrorCode::InvalidArgument, "the ODE integrator handles geodesic spheres and product tori only");
    }
    validate_state(initial, p);
    const Setup s = make_setup(p, config, curvature_of(initial, p));
    FlowTrace trace = start_trace(sphere ? "sphere" : "product", p, s);
    MonitorState monitors(s.thresholds, s.epsilon, s.sigma, s.eta);
    GeodesicWatch watch(p);

    const int n = p.n;
    const double c = p.c;
    const double rc = std::sqrt(c);
    const double A = minimal_r1sq(p);
    double y0 = sphere ? std::get<GeodesicSphere>(initial).rho : product_r1sq(std::get<ProductSn1S1>(initial), c);
    if (!sphere && is_minimal(p, y0)) y0 = A;
    // Spheres past the equator expand towards the antipodal pole.
    const double pole = std::numbers::pi / rc;
    const bool far_side = sphere && y0 > 0.5 * pole;
    auto radius = [&](double q) { return far_side ? pole - std::sqrt(q) : std::sqrt(q); };
    if (sphere) y0 = far_side ? (pole - y0) * (pole - y0) : y0 * y0;

    OdeRhs rhs = [&](double, const OdeState& y, OdeState& dy) {
        if (sphere) {
            // y is the squared distance to the nearer pole; smooth through 0
            dy[0] = -2.0 * n * x_cot_x(c * y[0]);
        } else {
            // 2 - 2n + 2nc r1^2, written about its zero
            dy[0] = 2.0 * n * c * (y[0] - A);
        }
    };

    auto record = [&](double t, double y) {
        const HypersurfaceState state = homogeneous_state(sphere, y, c);
        const MonitorRecord rec = monitors.update(curvature_of(state, p), t, y);
        trace.monitors.push_back(rec);
        if ((trace.monitors.size() - 1) % config.record_stride == 0) trace.samples.push_back({t, state});
        return rec;
    };

    const MonitorRecord first = record(0.0, sphere ? radius(y0) : y0);
    watch.quiet(first.h2_max, 0.0);
    bool done = false;

    OdeObserver observer = [&](AcceptedStep& step) {
        const double t = step.t;
        const double y = sphere ? radius((*step.y)[0]) : (*step.y)[0];
        if (sphere) {
            if ((*step.y)[0] < 1e-12 / c) {
                const double T = locate_event(rhs, ode_options(config), step, 0.0);
                trace.terminal = {TerminalKind::RoundPoint, t, T};
                done = true;
                return ObserverAction::Stop;
            }
        } else if (y < 1e-8 / c || y > 1.0 / c - 1e-8 / c) {
            const double target = y < 0.5 / c ? 0.0 : 1.0 / c;
            const double T = locate_event(rhs, ode_options(config), step, target);
            trace.terminal = {y < 0.5 / c ? TerminalKind::GreatCircleCollapse : TerminalKind::Blowup, t, T};
            done = true;
            return ObserverAction::Stop;
        }
        const MonitorRecord rec = record(t, y);
        watch.quiet(rec.h2_max, t);
        if (watch.held(t)) {
            trace.terminal = {TerminalKind::TotallyGeodesic, t, t};
            done = true;
            return ObserverAction::Stop;
        }
        return ObserverAction::Continue;
    };

    const OdeResult result = integrate_dopri5(rhs, 0.0, {y0}, config.t_max, ode_options(config), observer);
    trace.accepted_steps = result.accepted;
    trace.rejected_steps = result.rejected;
    if (!done) {
        const bool quiet = trace.monitors.back().h2_max < 1e-12 * c;
        trace.terminal = {quiet ? TerminalKind::TotallyGeodesic : TerminalKind::HorizonReached, result.t, result.t};
    }
    return trace;
}

namespace {

void unpack(const OdeState& y, ProfileCurve& curve) {
    const std::size_t N = y.size() / 3;
    curve.points.resize(N);
    for (std::size_t i = 0; i < N; ++i) curve.points[i] = {y[3 * i], y[3 * i + 1], y[3 * i + 2]};
}

void pack(const ProfileCurve& curve, OdeState& y) {
    y.resize(3 * curve.points.size());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        y[3 * i] = curve.points[i][0];
        y[3 * i + 1] = curve.points[i][1];
        y[3 * i + 2] = curve.points[i][2];
    }
}

double mean_H2(const StateCurvature& k) {
    double sum = 0.0;
    for (const CurvatureData& d : k.samples) sum += d.H * d.H;
    return sum / static_cast<double>(k.samples.size());
}

double max_umbilic_defect(const StateCurvature& k, int n) {
    double worst = 0.0;
    for (const CurvatureData& d : k.samples) worst = std::max(worst, d.h0_norm2 / (d.H * d.H / n));
    return worst;
}

} // namespace

FlowTrace flow_axisymmetric(const Axisymmetric& initial, const PinchingParams& p, const FlowConfig& config) {
    ProfileCurve curve = to_curve(initial);
    const std::size_t N = static_cast<std::size_t>(
        config.grid_size > 0 ? config.grid_size
                             : (initial.grid_size > 0 ? initial.grid_size : static_cast<int>(initial.profile.size())));
    curve = redistribute(curve, N);
    const ProfileTopology topology = curve.topology;
    const int grid = static_cast<int>(N);

    StateCurvature k0 = curve_state_curvature(curve, p);
    const Setup s = make_setup(p, config, k0);
    FlowTrace trace = start_trace("axisymmetric", p, s);
    MonitorState monitors(s.thresholds, s.epsilon, s.sigma, s.eta);
    GeodesicWatch watch(p);
    const int n = p.n;
    const double c = p.c;

    auto record = [&](double t, const ProfileCurve& cv, const StateCurvature& k) {
        const MonitorRecord rec = monitors.update(k, t, max_u(cv));
        trace.monitors.push_back(rec);
        if ((trace.monitors.size() - 1) % config.record_stride == 0) {
            check_embedded(cv);
            trace.samples.push_back({t, to_state(cv, grid)});
        }
        return rec;
    };
    watch.quiet(record(0.0, curve, k0).h2_max, 0.0);

    ProfileCurve work;
    work.topology = topology;
    std::vector<double> H_unit;
    std::vector<Vec3> normals;
    OdeRhs rhs = [&](double, const OdeState& y, OdeState& dy) {
        unpack(y, work);
        curve_velocity(work, n, H_unit, normals);
        for (std::size_t i = 0; i < N; ++i) {
            const double speed = c * H_unit[i];
            if (!std::isfinite(speed)) fail(ErrorCode::GeometryError, "non-finite curvature on the profile");
            dy[3 * i] = speed * normals[i][0];
            dy[3 * i + 1] = speed * normals[i][1];
            dy[3 * i + 2] = speed * normals[i][2];
        }
    };

    bool done = false;
    OdeObserver observer = [&](AcceptedStep& step) {
        const double t = step.t;
        ProfileCurve moved;
        moved.topology = topology;
        unpack(*step.y, moved);
        ProfileCurve cv = redistribute(moved, N);
        if (spacing_ratio(cv) < 1e-3) {
            fail(ErrorCode::MeshDegenerate, "profile samples collapsed at t = " + std::to_string(t));
        }
        pack(cv, *step.y);
        step.modified = true;

        const double u_top = max_u(cv);
        // keep the absolute tolerance proportional to the size of the profile
        *step.atol = config.tol * u_top;
        if (topology == ProfileTopology::Torus && u_top * u_top < 1e-8) {
            trace.terminal = {TerminalKind::GreatCircleCollapse, t, t + u_top * u_top / (2.0 * (n - 1.0) * c)};
            done = true;
            return ObserverAction::Stop;
        }
        const StateCurvature k = curve_state_curvature(cv, p);
        const MonitorRecord rec = record(t, cv, k);
        if (rec.h2_max > s.h2_halt) {
            if (topology == ProfileTopology::Sphere && max_umbilic_defect(k, n) < 1e-2) {
                trace.terminal = {TerminalKind::RoundPoint, t, t + n / (2.0 * mean_H2(k))};
            } else if (topology == ProfileTopology::Torus && u_top < 1e-2) {
                trace.terminal = {TerminalKind::GreatCircleCollapse, t, t + u_top * u_top / (2.0 * (n - 1.0) * c)};
            } else {
                trace.terminal = {TerminalKind::Blowup, t, t};
            }
            done = true;
            return ObserverAction::Stop;
        }
        watch.quiet(rec.h2_max, t);
        if (watch.held(t)) {
            trace.terminal = {TerminalKind::TotallyGeodesic, t, t};
            done = true;
            return ObserverAction::Stop;
        }
        return ObserverAction::Continue;
    };

    OdeState y0;
    pack(curve, y0);
    const OdeResult result = integrate_dopri5(rhs, 0.0, std::move(y0), config.t_max, ode_options(config), observer);
    trace.accepted_steps = result.accepted;
    trace.rejected_steps = result.rejected;
    if (!done) {
        const bool quiet = trace.monitors.back().h2_max < 1e-12 * c;
        trace.terminal = {quiet ? TerminalKind::TotallyGeodesic : TerminalKind::HorizonReached, result.t, result.t};
    }
    return trace;
}

FlowTrace simulate(const HypersurfaceState& initial, const PinchingParams& p, const FlowConfig& config) {
    if (const auto* profile = std::get_if<Axisymmetric>(&initial)) return flow_axisymmetric(*profile, p, config);
    return flow_ode_numeric(initial, p, config);
}

} // namespace pinchflow
