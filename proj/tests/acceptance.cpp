// Acceptance driver: one PASS/FAIL line per criterion, INFO lines for
// context. With an argument k only criterion k runs; exit status is 0 iff
// every criterion that ran passed.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pinchflow/flow.hpp"
#include "pinchflow/profile.hpp"
#include "pinchflow/verify.hpp"

using namespace pinchflow;

namespace {

const std::vector<int> kDims{3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
const std::vector<double> kCurvatures{0.25, 1.0, 4.0};

struct Outcome {
    bool passed = true;
    std::string summary;
    std::vector<std::string> problems;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            problems.push_back(what);
        }
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void info(const std::string& s) { std::printf("  INFO %s\n", s.c_str()); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// 1. critical constants
Outcome constants() {
    Outcome o;
    double worst_res = 0.0, worst_y = 0.0, worst_k = 0.0;
    for (int n : kDims) {
        const Thresholds t(PinchingParams::make(n, 1.0));
        const CriticalConstants& k = t.constants();
        worst_res = std::max(worst_res, k.bneq_residual);
        o.require(k.bneq_residual < 1e-10, "n=" + std::to_string(n) + " cubic residual " + fmt(k.bneq_residual));
        const double y_ref = static_cast<double>(oracle::y_n(n));
        const double k_ref = static_cast<double>(oracle::k_n(n));
        worst_y = std::max(worst_y, rel(k.y_n, y_ref));
        worst_k = std::max(worst_k, rel(k.k_n, k_ref));
        o.require(rel(k.y_n, y_ref) < 1e-12, "n=" + std::to_string(n) + " y_n differs from bisection");
        o.require(rel(k.k_n, k_ref) < 1e-7, "n=" + std::to_string(n) + " k_n differs from brute force");
        const double root = std::sqrt(n - 1.0);
        if (n == 4) o.require(k.k_n > 3.443 && k_ref > 3.443, "k_4 = " + fmt(k.k_n));
        if (n == 5) o.require(k.k_n > 3.998 && k_ref > 3.998, "k_5 = " + fmt(k.k_n));
        if (n >= 5 && n <= 9) o.require(k.k_n > 1.999 * root, "k_" + std::to_string(n) + " = " + fmt(k.k_n));
        if (n == 10) {
            o.require(std::abs(k.y_n - 12.0) <= 1e-9, "y_10 = " + fmt(k.y_n));
            o.require(std::abs(k.k_n - 6.0) <= 1e-9, "k_10 = " + fmt(k.k_n));
        }
    }
    const Thresholds t10(PinchingParams::make(10, 1.0));
    o.summary = "y_10 = " + fmt(t10.constants().y_n) + ", k_10 = " + fmt(t10.constants().k_n) +
                ", max cubic residual " + fmt(worst_res) + ", max rel. gap to oracles y " + fmt(worst_y) + " k " +
                fmt(worst_k);
    return o;
}

// 2. gamma properties and identities of alpha
Outcome gamma_properties() {
    Outcome o;
    std::size_t checks = 0;
    double worst_id = 0.0;
    for (int n : kDims) {
        for (double c : kCurvatures) {
            const Thresholds t(PinchingParams::make(n, c));
            std::vector<CheckReport> all = check_gamma_properties(t, GridSpec{});
            for (CheckReport& r : check_alpha_identities(t, GridSpec{})) all.push_back(r);
            for (const CheckReport& r : all) {
                ++checks;
                o.require(r.passed, r.check_id + " n=" + std::to_string(n) + " c=" + fmt(c) + ": " + r.detail);
            }
            // identities again with long double alpha and its difference quotient
            for (double f : {1e-6, 1e-2, 0.5, 1.0, 3.0, 20.0, 90.0}) {
                const double x = f * c;
                const long double a = oracle::alpha(n, c, x);
                const long double a1 = oracle::alpha_d1(n, c, x);
                const long double lhs = (a + n * c) * x * a1;
                const long double rhs = 2.0L * c * x + a * a - n * c * a;
                const double e1 = static_cast<double>(std::abs(lhs - rhs) / (std::abs(rhs) + c * c));
                const long double s = (n - 2.0L) / std::sqrt(static_cast<long double>(n) * (n - 1.0L));
                const long double l2 = s * std::sqrt(x * (a - x / n)) + a;
                const long double r2 = 2.0L * x / n + n * c;
                const double e2 = static_cast<double>(std::abs(l2 - r2) / r2);
                worst_id = std::max({worst_id, e1, e2});
                o.require(e1 < 1e-10 && e2 < 1e-10, "oracle identity residual at n=" + std::to_string(n) + " x=" + fmt(x));
            }
        }
    }
    o.summary = std::to_string(checks) + " grid checks over n=3..12, c in {0.25,1,4}; oracle identity residual " +
                fmt(worst_id);
    return o;
}

// 3. omega
Outcome omega_properties() {
    Outcome o;
    double worst_fd = 0.0, n3_value = 0.0;
    for (int n : kDims) {
        for (double c : kCurvatures) {
            const Thresholds t(PinchingParams::make(n, c));
            for (const CheckReport& r : check_omega_properties(t, GridSpec{})) {
                o.require(r.passed, r.check_id + " n=" + std::to_string(n) + " c=" + fmt(c) + ": " + r.detail);
            }
            // log-derivative of the long double omega by differences
            const long double x0 = oracle::y_n(n) * c;
            for (double f : {1.0, 1.3, 2.0, 10.0, 100.0}) {
                const long double x = f * x0;
                const long double h = 1e-4L * x;
                auto w = [&](long double s) { return oracle::omega(n, c, s); };
                const long double d1 =
                    (w(x + 3 * h) - 9 * w(x + 2 * h) + 45 * w(x + h) - 45 * w(x - h) + 9 * w(x - 2 * h) - w(x - 3 * h)) /
                    (60 * h);
                const long double a = oracle::alpha(n, c, x);
                const long double a1 = oracle::alpha_d1(n, c, x);
                const long double pred = (2 * a - x * a1 - 3.0L * n * c) / (x * (a + n * c));
                const double e = static_cast<double>(std::abs(d1 / w(x) - pred) / std::abs(pred));
                worst_fd = std::max(worst_fd, e);
                o.require(e < 1e-10, "log-derivative oracle residual " + fmt(e) + " at n=" + std::to_string(n));
            }
            // limits at x = 1e6 c from the long double closed form
            const long double X = 1e6L * c;
            const long double h = 1e-3L * X;
            auto w = [&](long double s) { return oracle::omega(n, c, s); };
            const long double d1 = (w(X + h) - w(X - h)) / (2 * h);
            const long double d2 = (w(X + h) - 2 * w(X) + w(X - h)) / (h * h);
            const double lim3 = 2.0 * (2.0 * n - 1.0) * c / (n - 1.0);
            const double lim2 = 1.0 / ((n - 1.0) * (n - 1.0));
            o.require(rel(static_cast<double>(w(X) - X * d1), lim3) < 1e-2, "w - x w' limit at n=" + std::to_string(n));
            o.require(rel(static_cast<double>(2 * X * d2 + d1), lim2) < 1e-2, "2x w'' + w' limit at n=" + std::to_string(n));
        }
    }
    {
        const Thresholds t(PinchingParams::make(3, 1.0));
        const Jet& w = t.omega_at_x0();
        n3_value = 2.0 * t.x0() * w.d2 + w.d1;
        o.require(n3_value >= 11.2 && n3_value <= 11.6, "n=3 value at x0 " + fmt(n3_value));
        // independent: centered differences of the long double formula at x0
        const long double x0 = oracle::y_n(3);
        const long double h = 1e-4L * x0;
        auto wf = [](long double s) { return oracle::omega(3, 1.0L, s); };
        const long double d1 = (wf(x0 + h) - wf(x0 - h)) / (2 * h);
        const long double d2 = (wf(x0 + h) - 2 * wf(x0) + wf(x0 - h)) / (h * h);
        const double ref = static_cast<double>(2 * x0 * d2 + d1);
        o.require(rel(n3_value, ref) < 1e-5, "n=3 value " + fmt(n3_value) + " vs differences " + fmt(ref));
    }
    o.summary = "n=3: 2x0 w''(x0) + w'(x0) = " + fmt(n3_value) + ", log-derivative oracle residual " + fmt(worst_fd);
    return o;
}

// 4. lower bound of gamma, minimum of alpha
Outcome lower_bounds() {
    Outcome o;
    double worst_min = 0.0, worst_slope = 0.0;
    for (int n : kDims) {
        for (double c : kCurvatures) {
            const Thresholds t(PinchingParams::make(n, c));
            for (const CheckReport& r : {check_gamma_lower_bound(t, GridSpec{}), check_alpha_minimum(t, GridSpec{})}) {
                o.require(r.passed, r.check_id + " n=" + std::to_string(n) + " c=" + fmt(c) + ": " + r.detail);
            }
        }
        const Thresholds t(PinchingParams::make(n, 1.0));
        const double target = 2.0 * std::sqrt(n - 1.0);
        const double x1 = t.constants().x1;
        const double brute = static_cast<double>(oracle::alpha_min(n, 1.0L));
        worst_min = std::max({worst_min, std::abs(t.alpha(x1) - target), std::abs(brute - target)});
        worst_slope = std::max(worst_slope, std::abs(t.alpha_jet(x1).d1));
        o.require(std::abs(t.alpha(x1) - target) <= 1e-9, "alpha(x1) = " + fmt(t.alpha(x1)));
        o.require(std::abs(brute - target) <= 1e-9, "brute-force min alpha = " + fmt(brute));
        o.require(std::abs(t.alpha_jet(x1).d1) <= 1e-12, "alpha'(x1) = " + fmt(t.alpha_jet(x1).d1));
    }
    o.summary = "max |min alpha - 2 sqrt(n-1)| " + fmt(worst_min) + ", max |alpha'(x1)| " + fmt(worst_slope);
    return o;
}

// 5. exact product flow
Outcome exact_flow() {
    Outcome o;
    const PinchingParams p = PinchingParams::make(10, 1.0);
    FlowConfig cfg;
    cfg.tol = 1e-12;
    const FlowTrace tr = flow_ode_numeric(product_from_r1sq(0.75, 1.0), p, cfg);
    double worst = 0.0;
    std::size_t compared = 0;
    for (const MonitorRecord& m : tr.monitors) {
        if (m.t > 0.089) break;
        worst = std::max(worst, std::abs(m.param - 0.9 * (1.0 - std::exp(20.0 * m.t) / 6.0)));
        ++compared;
    }
    const double T_exact = std::log(6.0) / 20.0;
    o.require(tr.terminal.kind == TerminalKind::GreatCircleCollapse, "terminal " + std::string(to_string(tr.terminal.kind)));
    o.require(worst <= 1e-8, "max r1^2 error " + fmt(worst));
    o.require(compared > 10, "too few samples before t = 0.089");
    o.require(std::abs(tr.terminal.T - T_exact) <= 1e-7, "T = " + fmt(tr.terminal.T));

    double drift = 0.0;
    for (double c : kCurvatures) {
        for (int n : {3, 10}) {
            const PinchingParams q = PinchingParams::make(n, c);
            const double A = (n - 1.0) / (n * c);
            FlowConfig f;
            f.t_max = 1.0 / c;
            const FlowTrace m = flow_ode_numeric(product_from_r1sq(A, c), q, f);
            for (const MonitorRecord& r : m.monitors) drift = std::max(drift, std::abs(r.param - A));
            o.require(m.terminal.kind == TerminalKind::HorizonReached && m.monitors.back().t == f.t_max,
                      "minimal torus did not reach t = 1/c");
        }
    }
    o.require(drift <= 1e-10, "minimal torus drift " + fmt(drift));
    o.summary = "max |r1^2 - exact| on [0, 0.089] = " + fmt(worst) + " over " + std::to_string(compared) +
                " steps, |T - ln6/20| = " + fmt(std::abs(tr.terminal.T - T_exact)) + ", minimal drift " + fmt(drift);
    return o;
}

// 6. reaction equations along homogeneous trajectories
Outcome reaction() {
    Outcome o;
    double worst_H = 0.0, worst_h2 = 0.0;
    std::size_t points = 0;
    auto run = [&](const HypersurfaceState& s, const PinchingParams& p, double T) {
        FlowConfig f;
        f.tol = 1e-12;
        f.dt_max = T / 1000.0;
        f.t_max = T;
        const FlowTrace tr = flow_ode_numeric(s, p, f);
        std::vector<double> ts, H, h2;
        for (const TraceSample& x : tr.samples) {
            if (x.t > 0.9 * T) break;
            const CurvatureData d = curvature_of(x.state, p).samples.front();
            ts.push_back(x.t);
            H.push_back(d.H);
            h2.push_back(d.h_norm2);
        }
        const double nc = p.n * p.c;
        for (std::size_t k = 2; k + 2 < ts.size(); ++k) {
            const std::vector<double> tw(ts.begin() + long(k) - 2, ts.begin() + long(k) + 3);
            const std::vector<double> Hw(H.begin() + long(k) - 2, H.begin() + long(k) + 3);
            const std::vector<double> hw(h2.begin() + long(k) - 2, h2.begin() + long(k) + 3);
            const double dH = oracle::lagrange_derivative(tw, Hw, 2);
            const double dh2 = oracle::lagrange_derivative(tw, hw, 2);
            const double rH = H[k] * (h2[k] + nc);
            const double rh2 = 4.0 * p.c * H[k] * H[k] + 2.0 * h2[k] * h2[k] - 2.0 * nc * h2[k];
            worst_H = std::max(worst_H, rel(dH, rH));
            worst_h2 = std::max(worst_h2, rel(dh2, rh2));
            ++points;
        }
    };
    for (int n : {3, 7, 12}) {
        for (double c : kCurvatures) {
            const PinchingParams p = PinchingParams::make(n, c);
            run(GeodesicSphere{1.0 / std::sqrt(c)}, p, -std::log(std::cos(1.0)) / (n * c));
            const Thresholds t(p);
            const ProductSn1S1 b = boundary_product(t);
            run(b, p, product_collapse(p, product_r1sq(b, c)).T);
        }
    }
    o.require(points > 1000, "only " + std::to_string(points) + " stencils");
    o.require(worst_H <= 1e-6, "dH/dt residual " + fmt(worst_H));
    o.require(worst_h2 <= 1e-6, "d|h|^2/dt residual " + fmt(worst_h2));
    o.summary = std::to_string(points) + " five-point stencils on accepted steps, max rel. residual dH/dt " +
                fmt(worst_H) + ", d|h|^2/dt " + fmt(worst_h2);
    return o;
}

// 7. pinching preservation
Outcome preservation() {
    Outcome o;
    int strict_runs = 0;
    std::size_t steps = 0;
    double worst_U = -INFINITY;
    auto strict = [&](const HypersurfaceState& s, const PinchingParams& p, const std::string& label, double tol) {
        const Thresholds t(p);
        const PinchingClass k = classify_pinching(curvature_of(s, p), t);
        o.require(k.kind == PinchingKind::Strict, label + " is not strictly pinched");
        FlowConfig f;
        f.tol = tol;
        const FlowTrace tr = simulate(s, p, f);
        o.require(tr.epsilon > 0.0, label + " has epsilon = 0");
        o.require(tr.terminal.kind == TerminalKind::RoundPoint,
                  label + " ended in " + std::string(to_string(tr.terminal.kind)));
        for (const MonitorRecord& m : tr.monitors) {
            worst_U = std::max(worst_U, m.U_max / (m.h2_max + p.c));
            if (!(m.U_max < 0.0)) {
                o.require(false, label + " has U = " + fmt(m.U_max) + " at t = " + fmt(m.t));
                break;
            }
        }
        steps += tr.monitors.size();
        ++strict_runs;
    };
    for (int n : {3, 6, 12}) {
        for (double c : kCurvatures) {
            for (double a : {0.5, 1.2, 2.4}) {
                strict(GeodesicSphere{a / std::sqrt(c)}, PinchingParams::make(n, c),
                       "sphere n=" + std::to_string(n) + " c=" + fmt(c) + " rho=" + fmt(a / std::sqrt(c)), 1e-10);
            }
        }
        for (double r : {0.6, 1.4, 2.2}) {
            strict(perturbed_cap_profile(r, 0.05, 3, 64), PinchingParams::make(n, 1.0),
                   "perturbed cap n=" + std::to_string(n) + " r=" + fmt(r), 1e-8);
        }
    }
    o.require(strict_runs >= 20, "only " + std::to_string(strict_runs) + " strict runs");

    // product tori below the boundary are never strictly pinched
    int strict_products = 0;
    for (int n : kDims) {
        const PinchingParams p = PinchingParams::make(n, 1.0);
        const Thresholds t(p);
        for (double lambda = 0.02; lambda < 50.0; lambda *= 1.05) {
            if (classify_pinching(curvature_of(ProductSn1S1{lambda}, p), t).kind == PinchingKind::Strict) ++strict_products;
        }
    }
    info("strictly pinched product tori found in a scan of n=3..12: " + std::to_string(strict_products) +
         " (|h|^2 equals alpha(H^2) on every product, which is at least gamma)");

    double worst_eq = 0.0;
    for (int n : kDims) {
        for (double c : kCurvatures) {
            const PinchingParams p = PinchingParams::make(n, c);
            const Thresholds t(p);
            const ProductSn1S1 b = boundary_product(t);
            FlowConfig f;
            f.tol = 1e-12;
            const FlowTrace tr = flow_ode_numeric(b, p, f);
            for (const MonitorRecord& m : tr.monitors) worst_eq = std::max(worst_eq, rel(m.h2_max, m.gamma_min));
        }
    }
    o.require(worst_eq <= 1e-7, "weak-equality products drift by " + fmt(worst_eq));
    o.summary = std::to_string(strict_runs) + " strict runs (spheres, perturbed caps), " + std::to_string(steps) +
                " accepted steps, max U/(|h|^2+c) " + fmt(worst_U) + "; weak-equality products |h|^2 vs gamma " +
                fmt(worst_eq);
    return o;
}

struct DecayStats {
    TerminalKind terminal;
    double t_end = 0.0;
    std::size_t after = 0;  // records with t >= 0.1/c
    double C0_growth = 0.0; // max C0 after the transient over C0 at its start
    double g_rise = 0.0;    // max g over the running minimum after the transient
};

DecayStats decay_stats(const Axisymmetric& s, const PinchingParams& p) {
    FlowConfig f;
    f.tol = 1e-8;
    f.t_max = 5.0 / p.c;
    const FlowTrace tr = simulate(s, p, f);
    DecayStats d{tr.terminal.kind, tr.terminal.t};
    const double t0 = 0.1 / p.c;
    double C0_start = NAN, g_min = INFINITY;
    for (const MonitorRecord& m : tr.monitors) {
        if (m.t < t0) continue;
        ++d.after;
        if (std::isnan(C0_start)) C0_start = m.C0;
        d.C0_growth = std::max(d.C0_growth, m.C0 / C0_start - 1.0);
        if (std::isfinite(g_min)) d.g_rise = std::max(d.g_rise, m.g_sigma / g_min - 1.0);
        g_min = std::min(g_min, m.g_sigma);
    }
    return d;
}

// 8. decay monitor on perturbed tori
Outcome decay() {
    Outcome o;
    std::string worst;
    for (int n : {3, 6}) {
        const PinchingParams p = PinchingParams::make(n, 1.0);
        const double minimal = std::asin(std::sqrt((n - 1.0) / n));
        // a torus whose unperturbed collapse happens at t = 0.3/c, so the run
        // outlives the transient, and one next to the minimal torus
        const double A = (n - 1.0) / n;
        const double shrinking = std::asin(std::sqrt(A * (1.0 - std::exp(-2.0 * n * 0.3))));
        for (double phi : {shrinking, minimal}) {
            const DecayStats d = decay_stats(perturbed_latitude_profile(phi, 0.05, 2, 64), p);
            const std::string label = "torus n=" + std::to_string(n) + " phi0=" + fmt(phi);
            info(label + ": " + to_string(d.terminal) + " at t=" + fmt(d.t_end) + ", " + std::to_string(d.after) +
                 " records after 0.1/c, C0 growth " + fmt(d.C0_growth) + ", g_sigma rise " + fmt(d.g_rise));
            o.require(d.after > 0, label + " ends before t = 0.1/c");
            o.require(d.C0_growth <= 0.05, label + " C0 grows by " + fmt(d.C0_growth));
            o.require(d.g_rise <= 0.05, label + " g_sigma rises by " + fmt(d.g_rise));
        }
    }
    for (int n : {3, 6}) {
        const DecayStats d = decay_stats(perturbed_cap_profile(1.4, 0.05, 3, 64), PinchingParams::make(n, 1.0));
        info("for comparison, perturbed cap n=" + std::to_string(n) + ": " + to_string(d.terminal) + " at t=" +
             fmt(d.t_end) + ", " + std::to_string(d.after) + " records after 0.1/c, C0 growth " + fmt(d.C0_growth) +
             ", g_sigma rise " + fmt(d.g_rise));
    }
    o.summary = "perturbed tori n in {3,6}, phi0 collapsing at 0.3/c or next to minimal, 5% mode-2 perturbation";
    return o;
}

// 9. curvature engine convergence
Outcome convergence() {
    Outcome o;
    const std::vector<int> grids{64, 128, 256, 512};
    auto run = [&](const std::string& label, auto build, int n, double c, double k_profile, double k_orbit) {
        std::vector<double> err;
        for (int N : grids) {
            double e = 0.0;
            for (const ProfilePoint& q : curve_curvature(to_curve(build(N)), n, c)) {
                e = std::max({e, std::abs(q.k_profile - k_profile) / (std::abs(k_profile) + std::sqrt(c)),
                              std::abs(q.k_orbit - k_orbit) / (std::abs(k_orbit) + std::sqrt(c))});
            }
            err.push_back(e);
        }
        std::string ratios;
        for (std::size_t i = 1; i < err.size(); ++i) {
            const double r = err[i - 1] / err[i];
            ratios += (i > 1 ? ", " : "") + fmt(r);
            o.require(r >= 3.5 && r <= 4.5, label + " error ratio " + fmt(r) + " at N=" + std::to_string(grids[i]));
        }
        o.require(err.back() <= 1e-6, label + " error " + fmt(err.back()) + " at N=512");
        info(label + ": error at N=512 " + fmt(err.back()) + ", ratios per halving " + ratios);
    };
    for (double c : {0.25, 4.0}) {
        const int n = 5;
        const double phi = 0.7;
        const double lambda = std::sqrt(c) / std::tan(phi);
        run("latitude c=" + fmt(c), [&](int N) { return latitude_profile(phi, N); }, n, c, -c / lambda, lambda);
        const double r = 1.1;
        const double k = oracle::sphere_kappa(c, r / std::sqrt(c));
        run("cap c=" + fmt(c), [&](int N) { return cap_profile(r, N); }, n, c, k, k);
    }
    o.summary = "latitude and cap profiles on N = 64, 128, 256, 512";
    return o;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"constants", constants},
        {"gamma properties and alpha identities", gamma_properties},
        {"omega properties", omega_properties},
        {"gamma lower bound and alpha minimum", lower_bounds},
        {"exact product flow", exact_flow},
        {"reaction equations", reaction},
        {"pinching preservation", preservation},
        {"decay monitor", decay},
        {"curvature engine convergence", convergence},
    };
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "usage: %s [1-%zu]\n", argv[0], criteria.size());
            return 2;
        }
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.passed = false;
            o.summary = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu %s: %s: %s (%.2fs)\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.summary.c_str(), secs);
        const std::size_t shown = std::min<std::size_t>(o.problems.size(), 8);
        for (std::size_t k = 0; k < shown; ++k) std::printf("  %s\n", o.problems[k].c_str());
        if (o.problems.size() > shown) std::printf("  ... %zu more\n", o.problems.size() - shown);
        std::fflush(stdout);
        if (!o.passed) ++failed;
    }
    return failed ? 1 : 0;
}
