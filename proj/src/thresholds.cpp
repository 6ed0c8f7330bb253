#include "pinchflow/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pinchflow/error.hpp"

namespace pinchflow {

PinchingParams PinchingParams::make(int n, double c) {
    if (n < 3) {
        fail(ErrorCode::DomainError, "dimension n must be at least 3, got " + std::to_string(n));
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        std::ostringstream os;
        os << "ambient curvature c must be positive and finite, got " << c;
        fail(ErrorCode::DomainError, os.str());
    }
    return PinchingParams{n, c};
}

const char* to_string(Branch branch) noexcept {
    return branch == Branch::Alpha ? "alpha" : "beta";
}

const char* to_string(KnBranch branch) noexcept {
    return branch == KnBranch::TaylorAtZero ? "taylor_at_zero" : "vertex";
}

namespace {

void require_nonnegative(double x) {
    if (!(x >= 0.0)) {
        std::ostringstream os;
        os << "threshold argument x = H^2 must be nonnegative, got " << x;
        fail(ErrorCode::DomainError, os.str());
    }
}

// Cubic whose unique positive root is y_n, split as lhs - rhs so callers can
// form a relative residual.
template <typename Real>
void bneq_terms(int n_int, Real y, Real& lhs, Real& rhs) {
    const Real n = n_int;
    const Real q = (n * n - 4 * n + 6) / (n * n - 4);
    const Real a = y + 6 * (n - 1);
    const Real b = y + 4 * (n - 1);
    lhs = y * a * a;
    rhs = q * q * b * b * b;
}

long double y_n_closed_form(int n_int) {
    const long double n = n_int;
    const long double s = std::sqrt(2.0L * n - 5.0L);
    const long double angle = std::atan((n * n - 4.0L * n + 6.0L) / (2.0L * (n - 1.0L) * s)) / 3.0L;
    return 4.0L * (1.0L - n) + 2.0L * (n * n - 4.0L) / s * std::cos(angle);
}

double y_n_root_scan(int n) {
    auto f = [n](double y) {
        double lhs = 0.0;
        double rhs = 0.0;
        bneq_terms<double>(n, y, lhs, rhs);
        return lhs - rhs;
    };
    const double upper = std::sqrt(8.0) * n * n;
    constexpr int cells = 4096;
    int sign_changes = 0;
    double lo = 0.0;
    double hi = 0.0;
    double prev_x = 0.0;
    double prev_f = f(0.0);
    for (int i = 1; i <= cells; ++i) {
        const double x = upper * i / cells;
        const double fx = f(x);
        if ((prev_f < 0.0) != (fx < 0.0)) {
            ++sign_changes;
            lo = prev_x;
            hi = x;
        }
        prev_x = x;
        prev_f = fx;
    }
    if (sign_changes != 1) {
        fail(ErrorCode::RootMismatch,
             "expected exactly one positive root of the y_n cubic below sqrt(8) n^2, found " +
                 std::to_string(sign_changes));
    }
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double alpha_value(const PinchingParams& p, double x) {
    require_nonnegative(x);
    const double n = p.n;
    const double c = p.c;
    const double q = x * x + 4.0 * (n - 1.0) * c * x;
    return n * c + n * x / (2.0 * (n - 1.0)) - (n - 2.0) * std::sqrt(q) / (2.0 * (n - 1.0));
}

AlphaJet eval_alpha(const PinchingParams& p, double x) {
    require_nonnegative(x);
    if (x == 0.0) {
        fail(ErrorCode::DerivativeAtZero, "derivatives of alpha are singular at x = 0");
    }
    const double n = p.n;
    const double c = p.c;
    const double q = x * x + 4.0 * (n - 1.0) * c * x;
    const double root = std::sqrt(q);
    const double shift = x + 2.0 * (n - 1.0) * c;
    AlphaJet out;
    out.value = alpha_value(p, x);
    out.d1 = n / (2.0 * (n - 1.0)) - (n - 2.0) / (2.0 * (n - 1.0)) * shift / root;
    out.d2 = 2.0 * (n - 2.0) * (n - 1.0) * c * c / (q * root);
    out.d3 = -6.0 * (n - 2.0) * (n - 1.0) * shift * c * c / (q * q * root);
    return out;
}

Jet omega_closed_form(const PinchingParams& p, double x) {
    if (!(x > 0.0)) {
        fail(ErrorCode::DomainError, "closed form of omega needs x > 0");
    }
    const double n = p.n;
    const double c = p.c;
    const Jet X = Jet::variable(x);
    const double ratio = n / (n - 2.0);
    const Jet s = pow(1.0 + 4.0 * (n - 1.0) * c / X, -0.5);
    const Jet bracket = (1.0 + n * n * c / X) * (ratio - s) / (ratio + s);
    return X * X / sqrt(X * X + 4.0 * (n - 1.0) * c * X) * (bracket * bracket);
}

KnValue compute_k_n(const PinchingParams& p) {
    const PinchingParams unit{p.n, 1.0};
    const double y = static_cast<double>(y_n_closed_form(p.n));
    const AlphaJet a = eval_alpha(unit, y);
    if (p.n == 3) {
        return {a.value - a.d1 * y + 0.5 * a.d2 * y * y, KnBranch::TaylorAtZero};
    }
    return {a.value - a.d1 * a.d1 / (2.0 * a.d2), KnBranch::Vertex};
}

CriticalConstants compute_y_n(const PinchingParams& p) {
    const long double y_ext = y_n_closed_form(p.n);
    CriticalConstants out;
    out.y_n = static_cast<double>(y_ext);
    out.y_n_scan = y_n_root_scan(p.n);
    if (std::abs(out.y_n - out.y_n_scan) > 1e-9 * std::max(1.0, out.y_n)) {
        std::ostringstream os;
        os.precision(17);
        os << "closed form y_n = " << out.y_n << " disagrees with root scan " << out.y_n_scan;
        fail(ErrorCode::RootMismatch, os.str());
    }
    long double lhs = 0.0L;
    long double rhs = 0.0L;
    bneq_terms<long double>(p.n, static_cast<long double>(out.y_n), lhs, rhs);
    out.bneq_residual = static_cast<double>(std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs)));

    out.x0 = out.y_n * p.c;
    out.x1 = (p.n * std::sqrt(p.n - 1.0) - 2.0 * p.n + 2.0) * p.c;
    const KnValue k = compute_k_n(p);
    out.k_n = k.value;
    out.k_n_branch = k.branch;
    return out;
}

Thresholds::Thresholds(PinchingParams params) : params_(PinchingParams::make(params.n, params.c)) {
    constants_ = compute_y_n(params_);
    alpha_x0_ = eval_alpha(params_, constants_.x0);
    omega_x0_ = omega_closed_form(params_, constants_.x0);

    // The quadratic extension of omega on [0, x0] attains its minimum either
    // at an endpoint or at its vertex.
    const double x0 = constants_.x0;
    double lowest = std::min(omega_x0_.v, omega(0.0).value);
    if (omega_x0_.d2 > 0.0) {
        const double vertex = x0 - omega_x0_.d1 / omega_x0_.d2;
        if (vertex > 0.0 && vertex < x0) lowest = std::min(lowest, omega(vertex).value);
    }
    if (!(lowest > 0.0)) {
        std::ostringstream os;
        os << "quadratic extension of omega below x0 is not positive for n = " << params_.n
           << ", c = " << params_.c;
        fail(ErrorCode::DomainError, os.str());
    }
}

QuadraticJet Thresholds::beta(double x) const {
    require_nonnegative(x);
    const double dx = x - constants_.x0;
    const AlphaJet& a = alpha_x0_;
    return {a.value + a.d1 * dx + 0.5 * a.d2 * dx * dx, a.d1 + a.d2 * dx, a.d2};
}

QuadraticJet Thresholds::gamma(double x) const {
    require_nonnegative(x);
    if (x >= constants_.x0) {
        const AlphaJet a = eval_alpha(params_, x);
        return {a.value, a.d1, a.d2};
    }
    return beta(x);
}

QuadraticJet Thresholds::omega(double x) const {
    require_nonnegative(x);
    if (x >= constants_.x0) {
        const Jet w = omega_closed_form(params_, x);
        return {w.v, w.d1, w.d2};
    }
    const double dx = x - constants_.x0;
    const Jet& w = omega_x0_;
    return {w.v + w.d1 * dx + 0.5 * w.d2 * dx * dx, w.d1 + w.d2 * dx, w.d2};
}

ThresholdBundle Thresholds::evaluate(double x) const {
    require_nonnegative(x);
    ThresholdBundle b;
    b.x = x;
    b.alpha = alpha_value(params_, x);
    if (x > 0.0) {
        const AlphaJet a = eval_alpha(params_, x);
        b.alpha_d1 = a.d1;
        b.alpha_d2 = a.d2;
        b.alpha_d3 = a.d3;
    }
    const QuadraticJet be = beta(x);
    b.beta = be.value;
    b.beta_d1 = be.d1;
    b.beta_d2 = be.d2;
    const QuadraticJet g = gamma(x);
    b.gamma = g.value;
    b.gamma_d1 = g.d1;
    b.gamma_d2 = g.d2;
    const QuadraticJet w = omega(x);
    b.omega = w.value;
    b.omega_d1 = w.d1;
    b.omega_d2 = w.d2;
    b.active_branch = branch(x);
    return b;
}

QuadraticJet eval_beta(const Thresholds& t, double x) { return t.beta(x); }
ThresholdBundle eval_gamma(const Thresholds& t, double x) { return t.evaluate(x); }
QuadraticJet eval_omega(const Thresholds& t, double x) { return t.omega(x); }

} // namespace pinchflow
