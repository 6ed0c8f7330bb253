#include "pinchflow/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "pinchflow/error.hpp"
#include "pinchflow/geometry.hpp"
#include "pinchflow/profile.hpp"

namespace pinchflow {

namespace {

double x2_point(const PinchingParams& p) {
    const double s = std::sqrt(p.n - 1.0) - 1.0 / std::numbers::sqrt2;
    return std::sqrt(2.0 * (p.n - 1.0)) * s * s * p.c;
}

// Upper bound for y_n that the constant checks compare against.
double y_bound(int n) { return 4.0 * (1.0 - n) + 2.0 * (n * n - 4.0) / std::sqrt(2.0 * n - 5.0); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Collects margins of one check: the worst one, failures and equality runs.
class Tally {
public:
    Tally(std::string id, const Thresholds& t, std::size_t grid) {
        r_.check_id = std::move(id);
        r_.n = t.n();
        r_.c = t.c();
        r_.grid_size = grid;
        r_.worst_margin = INFINITY;
    }

    void margin(double m, double x) {
        if (m < r_.worst_margin || std::isnan(m)) {
            r_.worst_margin = m;
            r_.worst_x = x;
        }
    }

    void failure(const std::string& what) {
        ++failures_;
        if (failures_ <= 3) {
            if (!r_.detail.empty()) r_.detail += "; ";
            r_.detail += what;
        }
    }

    // Equality runs are tracked over consecutive grid points.
    void equal_at(double x, bool equal) {
        if (equal) {
            if (!open_) r_.equality_loci.push_back({x, x});
            r_.equality_loci.back().hi = x;
        }
        open_ = equal;
    }

    void note(const std::string& what) {
        if (!r_.detail.empty()) r_.detail += "; ";
        r_.detail += what;
    }

    CheckReport finish() {
        if (failures_ > 3) note(std::to_string(failures_ - 3) + " further failures");
        r_.passed = failures_ == 0 && !std::isnan(r_.worst_margin);
        if (std::isinf(r_.worst_margin)) r_.worst_margin = 0.0;
        return r_;
    }

    const std::vector<Interval>& loci() const { return r_.equality_loci; }

private:
    CheckReport r_;
    std::size_t failures_ = 0;
    bool open_ = false;
};

// Grid points adjacent to x0, used to judge equality loci to one cell.
struct Neighbours {
    double below;
    double above;
};

Neighbours neighbours(const std::vector<double>& grid, double x) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), x * (1.0 - 1e-12));
    const double below = it == grid.begin() ? grid.front() : *std::prev(it);
    auto up = it;
    while (up != grid.end() && *up <= x * (1.0 + 1e-12)) ++up;
    const double above = up == grid.end() ? grid.back() : *up;
    return {below, above};
}

double rel(double a, double b, double floor) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor}); }

} // namespace

void require_passed(const CheckReport& report) {
    if (report.passed) return;
    std::ostringstream os;
    os.precision(6);
    os << report.check_id << " failed for n = " << report.n << ", c = " << report.c
       << ": worst margin " << report.worst_margin << " at x = " << report.worst_x;
    if (!report.detail.empty()) os << " (" << report.detail << ")";
    fail(ErrorCode::CheckFailure, os.str());
}

std::vector<double> make_grid(const Thresholds& t, const GridSpec& spec) {
    if (spec.log_points < 2 || spec.linear_points < 2 || !(spec.lo > 0.0 && spec.lo < 1.0) || !(spec.hi > 1.0)) {
        fail(ErrorCode::InvalidArgument, "grid needs at least two points per part and lo < 1 < hi");
    }
    const double c = t.c();
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(spec.log_points + spec.linear_points + 4));
    const double l0 = std::log(spec.lo * c);
    const double l1 = std::log(c);
    for (int i = 0; i < spec.log_points; ++i) xs.push_back(std::exp(l0 + (l1 - l0) * i / spec.log_points));
    for (int i = 0; i < spec.linear_points; ++i) {
        xs.push_back(c + (spec.hi - 1.0) * c * i / (spec.linear_points - 1));
    }
    const PinchingParams& p = t.params();
    for (double x : {t.x0(), t.constants().x1, (p.n - 2.0) * (p.n - 2.0) * c, x2_point(p)}) {
        if (x >= spec.lo * c && x <= spec.hi * c) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        if (out.empty() || x - out.back() > 1e-12 * x) {
            out.push_back(x);
        } else if (x == t.x0() || x == t.constants().x1) {
            out.back() = x; // keep the distinguished value itself
        }
    }
    return out;
}

std::vector<CheckReport> check_gamma_properties(const Thresholds& t, const GridSpec& spec) {
    const std::vector<double> grid = make_grid(t, spec);
    const int n = t.n();
    const double c = t.c();
    const double x0 = t.x0();
    const double nc = n * c;
    const double ok = (n - 2.0) / std::sqrt(n * (n - 1.0));
    Tally i("gamma.i", t, grid.size()), ii("gamma.ii", t, grid.size()), iii("gamma.iii", t, grid.size()),
        iv("gamma.iv", t, grid.size()), v("gamma.v", t, grid.size()), vi("gamma.vi", t, grid.size());

    for (double x : grid) {
        const QuadraticJet g = t.gamma(x);
        {
            const double lhs = 2.0 * x * g.d2 + g.d1;
            const double rhs = 3.0 / (n + 2.0);
            const double m = (rhs - lhs) / std::max({std::abs(lhs), rhs, 1.0});
            i.margin(m, x);
            i.equal_at(x, std::abs(m) <= kEqualityTol);
            if (m < -kEqualityTol) i.failure("2x g'' + g' exceeds 3/(n+2) at x = " + fmt(x));
        }
        {
            const double lhs = (g.value + nc) * x * g.d1;
            const double rhs = 2.0 * c * x + g.value * g.value - nc * g.value;
            const double m = (lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), c * c});
            ii.margin(m, x);
            ii.equal_at(x, std::abs(m) <= kEqualityTol);
            if (m < -kEqualityTol) ii.failure("slope inequality fails at x = " + fmt(x));
        }
        {
            const double m = (g.value - x * g.d1) / std::max({std::abs(g.value), std::abs(x * g.d1), c});
            iii.margin(m, x);
            if (m < kStrictTol) iii.failure("g <= x g' at x = " + fmt(x));
        }
        {
            const double a = t.alpha(x);
            const double b = t.beta(x).value;
            const double scale = std::max({std::abs(a), std::abs(b), c});
            const double identity = std::abs(g.value - std::min(a, b)) / scale;
            if (identity > kIdentityTol) iv.failure("g differs from min(alpha, beta) at x = " + fmt(x));
            const double order = (x < x0 ? a - b : b - a) / scale;
            const bool equal = std::abs(a - b) <= kEqualityTol * scale;
            iv.margin(equal ? 0.0 : order, x);
            iv.equal_at(x, equal);
            if (!equal && order < 0.0) iv.failure("alpha and beta in the wrong order at x = " + fmt(x));
        }
        {
            const double lower = g.value - (x / (n - 1.0) + 2.0 * c);
            const double upper = x / (n - 1.0) + nc - g.value;
            const double m = std::min(lower, upper) / std::max(std::abs(g.value), c);
            v.margin(m, x);
            if (m < kStrictTol) v.failure("two-sided bound fails at x = " + fmt(x));
        }
        {
            const double lhs = ok * std::sqrt(x * std::max(0.0, g.value - x / n)) + g.value;
            const double rhs = 2.0 * x / n + nc;
            const double m = (rhs - lhs) / std::max({std::abs(lhs), std::abs(rhs), c});
            vi.margin(m, x);
            vi.equal_at(x, std::abs(m) <= kEqualityTol);
            if (m < -kEqualityTol) vi.failure("traceless bound fails at x = " + fmt(x));
        }
    }

    const Neighbours nb = neighbours(grid, x0);
    if (i.loci().size() != 1 || i.loci()[0].lo < nb.below || i.loci()[0].hi > nb.above) {
        i.failure("equality expected only at x0 = " + fmt(x0));
    }
    if (ii.loci().size() != 1 || ii.loci()[0].lo < nb.below || ii.loci()[0].lo > x0 ||
        ii.loci()[0].hi != grid.back()) {
        ii.failure("equality expected exactly on [x0, inf) with x0 = " + fmt(x0));
    }
    if (iv.loci().size() != 1 || iv.loci()[0].lo > x0 || iv.loci()[0].hi < x0) {
        iv.failure("alpha and beta should touch only near x0 = " + fmt(x0));
    }
    if (vi.loci().empty() || vi.loci().back().lo > x0 || vi.loci().back().hi != grid.back()) {
        vi.failure("equality expected on [x0, inf)");
    }
    return {i.finish(), ii.finish(), iii.finish(), iv.finish(), v.finish(), vi.finish()};
}

std::vector<CheckReport> check_alpha_identities(const Thresholds& t, const GridSpec& spec) {
    const std::vector<double> grid = make_grid(t, spec);
    const int n = t.n();
    const double c = t.c();
    const double nc = n * c;
    const double ok = (n - 2.0) / std::sqrt(n * (n - 1.0));
    Tally slope("identity.slope", t, grid.size()), traceless("identity.traceless", t, grid.size());
    for (double x : grid) {
        const AlphaJet a = t.alpha_jet(x);
        const double r1 = rel((a.value + nc) * x * a.d1, 2.0 * c * x + a.value * a.value - nc * a.value, c * c);
        slope.margin(-r1, x);
        if (r1 > kIdentityTol) slope.failure("residual " + fmt(r1) + " at x = " + fmt(x));
        const double lhs = ok * std::sqrt(x * (a.value - x / n)) + a.value;
        const double r2 = rel(lhs, 2.0 * x / n + nc, c);
        traceless.margin(-r2, x);
        if (r2 > kIdentityTol) traceless.failure("residual " + fmt(r2) + " at x = " + fmt(x));
    }
    return {slope.finish(), traceless.finish()};
}

CheckReport check_phi1(const Thresholds& t, const GridSpec& spec) {
    const std::vector<double> grid = make_grid(t, spec);
    const int n = t.n();
    const double c = t.c();
    auto closed = [&](double x) {
        const double Q = x * x + 4.0 * (n - 1.0) * c * x;
        return n / (2.0 * (n - 1.0)) - (n - 2.0) * x * x * (x + 6.0 * (n - 1.0) * c) / (2.0 * (n - 1.0) * Q * std::sqrt(Q));
    };
    auto derived = [&](double x) {
        const AlphaJet a = t.alpha_jet(x);
        return 2.0 * x * a.d2 + a.d1;
    };
    Tally r("phi1", t, grid.size());
    const double limit = 1.0 / (n - 1.0);
    double prev = INFINITY;
    for (double x : grid) {
        const double f = closed(x);
        const double e = rel(f, derived(x), limit);
        if (e > kIdentityTol) r.failure("closed form disagrees with 2x a'' + a' by " + fmt(e) + " at x = " + fmt(x));
        const double m = std::min(prev - f, f - limit);
        r.margin(m, x);
        if (!(f < prev)) r.failure("not strictly decreasing at x = " + fmt(x));
        if (!(f > limit)) r.failure("not above the limit at x = " + fmt(x));
        prev = f;
    }
    const double x1 = t.constants().x1;
    const double at_x0 = rel(closed(t.x0()), 3.0 / (n + 2.0), 0.0);
    const double at_x1 = rel(closed(x1), 4.0 / (2.0 * std::sqrt(n - 1.0) + n), 0.0);
    const double far = rel(closed(1e8 * c), limit, 0.0);
    if (at_x0 > kIdentityTol) r.failure("value at x0 off by " + fmt(at_x0));
    if (at_x1 > kIdentityTol) r.failure("value at x1 off by " + fmt(at_x1));
    if (far > 1e-5) r.failure("value at 1e8 c is " + fmt(far) + " away from 1/(n-1)");
    r.note("rel. error at x0 " + fmt(at_x0) + ", at x1 " + fmt(at_x1) + ", at 1e8c " + fmt(far));
    return r.finish();
}

std::vector<CheckReport> check_omega_properties(const Thresholds& t, const GridSpec& spec) {
    const std::vector<double> grid = make_grid(t, spec);
    const int n = t.n();
    const double c = t.c();
    const double nc = n * c;
    const double x0 = t.x0();
    Tally i("omega.i", t, grid.size()), ii("omega.ii", t, grid.size()), iii("omega.iii", t, grid.size());

    for (double x : grid) {
        const QuadraticJet w = t.omega(x);
        if (!(w.value > 0.0)) ii.failure("omega not positive at x = " + fmt(x));
        if (x < x0) continue;
        const QuadraticJet g = t.gamma(x);
        const double lhs = (g.value + nc) * x * w.d1 / w.value;
        const double rhs = 2.0 * g.value - x * g.d1 - 3.0 * nc;
        const double e = rel(lhs, rhs, c);
        i.margin(-e, x);
        if (e > kIdentityTol) i.failure("log-derivative residual " + fmt(e) + " at x = " + fmt(x));
    }

    const Jet& w0 = t.omega_at_x0();
    const double v0 = 2.0 * x0 * w0.d2 + w0.d1;
    ii.margin(v0, x0);
    if (!(v0 > 0.0)) ii.failure("2x w'' + w' at x0 is " + fmt(v0));
    if (n == 3 && !(v0 > 11.2 && v0 < 11.6)) ii.failure("2x w'' + w' at x0 is " + fmt(v0) + ", expected near 11.4");
    const double big = 1e6 * c;
    const Jet wb = omega_closed_form(t.params(), big);
    const double limit = 1.0 / ((n - 1.0) * (n - 1.0));
    const double far = rel(2.0 * big * wb.d2 + wb.d1, limit, 0.0);
    if (far > 1e-2) ii.failure("2x w'' + w' at 1e6 c is " + fmt(far) + " away from 1/(n-1)^2");
    ii.note("value at x0 " + fmt(v0) + ", rel. distance from the limit at 1e6c " + fmt(far));

    double sup = -INFINITY;
    for (double x : grid) {
        const QuadraticJet w = t.omega(x);
        sup = std::max(sup, w.value - x * w.d1);
    }
    const double target = 2.0 * (2.0 * n - 1.0) * c / (n - 1.0);
    const double gap = rel(wb.v - big * wb.d1, target, 0.0);
    iii.margin(-gap, big);
    if (gap > 1e-3) iii.failure("w - x w' at 1e6 c is " + fmt(gap) + " away from its limit");
    if (!std::isfinite(sup)) iii.failure("w - x w' is unbounded on the grid");
    iii.note("sup on grid " + fmt(sup) + ", limit " + fmt(target));
    return {i.finish(), ii.finish(), iii.finish()};
}

CheckReport check_constants(const Thresholds& t) {
    const CriticalConstants& k = t.constants();
    const int n = t.n();
    const double c = t.c();
    Tally r("constants", t, 0);
    auto need = [&](bool ok, double margin, const std::string& what) {
        r.margin(margin, k.x0);
        if (!ok) r.failure(what);
    };
    need(k.bneq_residual < 1e-10, 1e-10 - k.bneq_residual, "cubic residual " + fmt(k.bneq_residual));
    need(std::abs(k.y_n - k.y_n_scan) <= 1e-9 * std::max(1.0, k.y_n), 0.0, "scan root " + fmt(k.y_n_scan));
    need(k.y_n > 0.0 && k.y_n < std::sqrt(8.0) * n * n, k.y_n, "y_n = " + fmt(k.y_n) + " outside (0, sqrt8 n^2)");
    need(k.x0 >= k.x1, (k.x0 - k.x1) / c, "x0 < x1");
    const double yb = y_bound(n);
    need(k.y_n < yb, (yb - k.y_n) / yb, "y_n = " + fmt(k.y_n) + " not below " + fmt(yb));
    const double q = 2.0 / 15.0 * n * (n + 2.0);
    need(yb <= q * (1.0 + 1e-15), (q - yb) / q, "bound " + fmt(yb) + " above 2n(n+2)/15 = " + fmt(q));

    const double root = std::sqrt(n - 1.0);
    need(k.k_n > 1.8 * root, (k.k_n - 1.8 * root) / root, "k_n = " + fmt(k.k_n) + " not above 9/5 sqrt(n-1)");
    if (n == 4) need(k.k_n > 3.443, k.k_n - 3.443, "k_4 = " + fmt(k.k_n));
    if (n == 5) need(k.k_n > 3.998, k.k_n - 3.998, "k_5 = " + fmt(k.k_n));
    if (n >= 5 && n <= 9) need(k.k_n > 1.999 * root, k.k_n - 1.999 * root, "k_n = " + fmt(k.k_n));
    if (n == 10) {
        need(std::abs(k.y_n - 12.0) <= 1e-9, 0.0, "y_10 = " + fmt(k.y_n));
        need(std::abs(k.k_n - 6.0) <= 1e-9, 0.0, "k_10 = " + fmt(k.k_n));
    }
    if (n == 3) {
        need(k.k_n_branch == KnBranch::TaylorAtZero, 0.0, "k_3 should come from the value at zero");
    } else {
        need(k.k_n_branch == KnBranch::Vertex, 0.0, "k_n should come from the vertex");
    }
    if (n >= 4) {
        const double m = (n - 2.0) * (n - 2.0);
        need(yb < m, (m - yb) / m, "bound " + fmt(yb) + " not below (n-2)^2");
        const double a = t.alpha(m * c);
        need(rel(a, n * c, 0.0) <= kIdentityTol, 0.0, "alpha((n-2)^2 c) = " + fmt(a));
    }
    if (n >= 6) {
        const double x2 = x2_point(t.params());
        need(yb * c < x2, (x2 - yb * c) / x2, "x2 = " + fmt(x2) + " not above the y_n bound");
        const AlphaJet a = t.alpha_jet(x2);
        need(rel(a.d1, 1.0 / (2.0 * n - 3.0), 0.0) <= kIdentityTol, 0.0, "alpha'(x2) = " + fmt(a.d1));
        const double d2 = 4.0 * std::numbers::sqrt2 * (n - 2.0) / (root * std::pow(2.0 * n - 3.0, 3) * c);
        need(rel(a.d2, d2, 0.0) <= kIdentityTol, 0.0, "alpha''(x2) = " + fmt(a.d2));
        const double lb = 2.0 * root - root * (2.0 * n - 3.0) / (8.0 * std::numbers::sqrt2 * (n - 2.0));
        need(k.k_n > lb && lb > 1.8 * root, k.k_n - lb, "k_n = " + fmt(k.k_n) + ", chain bound " + fmt(lb));
    }
    const AlphaJet a0 = t.alpha_at_x0();
    const double phi = 2.0 * k.x0 * a0.d2 + a0.d1;
    need(phi < 2.0 * n * c / (5.0 * k.x0), 2.0 * n * c / (5.0 * k.x0) - phi, "2x0 a'' + a' too large");
    r.note("y_n " + fmt(k.y_n) + ", k_n " + fmt(k.k_n));
    return r.finish();
}

CheckReport check_gamma_lower_bound(const Thresholds& t, const GridSpec& spec) {
    std::vector<double> grid = make_grid(t, spec);
    grid.insert(grid.begin(), 0.0);
    const int n = t.n();
    const double c = t.c();
    const double floor = 1.8 * std::sqrt(n - 1.0) * c;
    const double kc = t.constants().k_n * c;
    Tally r("gamma_lower_bound", t, grid.size());
    for (double x : grid) {
        const double g = t.gamma(x).value;
        r.margin((g - floor) / g, x);
        if (!(g > floor)) r.failure("gamma = " + fmt(g) + " at x = " + fmt(x));
        if (g < kc * (1.0 - 1e-12)) r.failure("gamma below k_n c at x = " + fmt(x));
        if (n == 3 && x < t.x0()) {
            const double q = 0.027 * x * x / c + 0.304 * x + 2.661 * c;
            if (!(t.beta(x).value > q)) r.failure("beta not above the quadratic at x = " + fmt(x));
            if (!(q > floor)) r.failure("quadratic not above 9/5 sqrt2 c at x = " + fmt(x));
        }
    }
    return r.finish();
}

CheckReport check_alpha_minimum(const Thresholds& t, const GridSpec& spec) {
    const std::vector<double> grid = make_grid(t, spec);
    const int n = t.n();
    const double c = t.c();
    const double x1 = t.constants().x1;
    const double floor = 2.0 * std::sqrt(n - 1.0) * c;
    Tally r("alpha_minimum", t, grid.size());
    const AlphaJet a1 = t.alpha_jet(x1);
    if (std::abs(a1.value - floor) > 1e-9 * c) r.failure("alpha(x1) = " + fmt(a1.value));
    if (std::abs(a1.d1) > 1e-12) r.failure("alpha'(x1) = " + fmt(a1.d1));
    const double d2 = 2.0 / ((n - 2.0) * (n - 2.0) * std::sqrt(n - 1.0) * c);
    if (rel(a1.d2, d2, 0.0) > kIdentityTol) r.failure("alpha''(x1) = " + fmt(a1.d2));
    for (double x : grid) {
        const double a = t.alpha(x);
        r.margin((a - floor) / c, x);
        if (a < floor - 1e-12 * c) r.failure("alpha below 2 sqrt(n-1) c at x = " + fmt(x));
        if (!(t.alpha_jet(x).d2 > 0.0)) r.failure("alpha not convex at x = " + fmt(x));
    }
    return r.finish();
}

CheckReport check_derivatives(const Thresholds& t, std::uint64_t seed, int points) {
    const double c = t.c();
    const double x0 = t.x0();
    std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(t.n()) << 32));
    std::uniform_real_distribution<double> logx(std::log(1e-4 * c), std::log(100.0 * c));
    Tally r("derivatives", t, static_cast<std::size_t>(points));

    // Five-point centered difference of f against the claimed derivative.
    auto probe = [&](const char* name, int order, double x, const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double base) {
        const double h = 1e-3 * x;
        const double fd = (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
        const double exact = df(x);
        const double e = std::abs(fd - exact) / std::max({std::abs(exact), std::abs(fd), 1e-4 * std::abs(base) / std::pow(x, order)});
        r.margin(-e, x);
        if (e > 1e-6) r.failure(std::string(name) + " off by " + fmt(e) + " at x = " + fmt(x));
    };

    int done = 0;
    while (done < points) {
        const double x = std::exp(logx(rng));
        if (std::abs(x - x0) < 5e-3 * x) continue;
        ++done;
        const double av = t.alpha(x);
        probe("alpha'", 1, x, [&](double s) { return t.alpha(s); }, [&](double s) { return t.alpha_jet(s).d1; }, av);
        probe("alpha''", 2, x, [&](double s) { return t.alpha_jet(s).d1; }, [&](double s) { return t.alpha_jet(s).d2; }, av);
        probe("alpha'''", 3, x, [&](double s) { return t.alpha_jet(s).d2; }, [&](double s) { return t.alpha_jet(s).d3; }, av);
        const double bv = t.beta(x).value;
        probe("beta'", 1, x, [&](double s) { return t.beta(s).value; }, [&](double s) { return t.beta(s).d1; }, bv);
        probe("beta''", 2, x, [&](double s) { return t.beta(s).d1; }, [&](double s) { return t.beta(s).d2; }, bv);
        const double gv = t.gamma(x).value;
        probe("gamma'", 1, x, [&](double s) { return t.gamma(s).value; }, [&](double s) { return t.gamma(s).d1; }, gv);
        probe("gamma''", 2, x, [&](double s) { return t.gamma(s).d1; }, [&](double s) { return t.gamma(s).d2; }, gv);
        const double wv = t.omega(x).value;
        probe("omega'", 1, x, [&](double s) { return t.omega(s).value; }, [&](double s) { return t.omega(s).d1; }, wv);
        probe("omega''", 2, x, [&](double s) { return t.omega(s).d1; }, [&](double s) { return t.omega(s).d2; }, wv);
    }
    return r.finish();
}

CheckReport check_okumura(const PinchingParams& p, std::uint64_t seed, int samples) {
    const Thresholds t(p);
    const int n = p.n;
    const double c = p.c;
    const double ok = (n - 2.0) / std::sqrt(n * (n - 1.0));
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> dist(-10.0 * std::sqrt(c), 10.0 * std::sqrt(c));
    Tally r("okumura", t, static_cast<std::size_t>(samples));

    auto test = [&](const std::vector<double>& lambda) {
        std::vector<PrincipalCurvature> principal;
        for (double l : lambda) principal.push_back({l, 1});
        const CurvatureData d = curvature_from_principal(principal, p);
        double mean = 0.0;
        for (double l : lambda) mean += l;
        mean /= n;
        double s2 = 0.0, s3 = 0.0;
        for (double l : lambda) {
            s2 += (l - mean) * (l - mean);
            s3 += (l - mean) * (l - mean) * (l - mean);
        }
        const double h0 = std::sqrt(s2);
        const double bound = ok * h0 * h0 * h0;
        const double m = (bound - std::abs(s3)) / std::max(bound, std::pow(c, 1.5));
        r.margin(m, d.H * d.H);
        if (m < -1e-12) r.failure("cubic bound fails by " + fmt(m));
        // the Simons term is bounded below through the same inequality
        const double w_lb = d.h0_norm2 * (-ok * std::abs(d.H) * std::sqrt(d.h0_norm2) + d.H * d.H / n - d.h0_norm2 + n * c);
        const double scale = std::max({std::abs(d.W), std::abs(w_lb), c * c, d.h_norm2 * d.h_norm2});
        if ((d.W - w_lb) / scale < -1e-12) r.failure("W below its lower bound by " + fmt((d.W - w_lb) / scale));
    };

    std::vector<double> lambda(static_cast<std::size_t>(n));
    for (int s = 0; s < samples; ++s) {
        for (double& l : lambda) l = dist(rng);
        test(lambda);
    }
    // extremal configurations: n-1 equal entries
    double tight = INFINITY;
    for (double a : {-3.0, -0.5, 0.7, 2.0}) {
        std::fill(lambda.begin(), lambda.end(), a * std::sqrt(c));
        lambda.back() = -a * std::sqrt(c) * 0.3;
        std::vector<PrincipalCurvature> pr{{a * std::sqrt(c), n - 1}, {-a * std::sqrt(c) * 0.3, 1}};
        const CurvatureData d = curvature_from_principal(pr, p);
        double s3 = 0.0;
        const double mean = d.H / n;
        for (double l : lambda) s3 += (l - mean) * (l - mean) * (l - mean);
        const double bound = ok * std::pow(d.h0_norm2, 1.5);
        tight = std::min(tight, std::abs(std::abs(s3) - bound) / bound);
        test(lambda);
    }
    if (tight > 1e-12) r.failure("extremal configuration misses equality by " + fmt(tight));
    return r.finish();
}

std::vector<double> fd_weights(double x0, const std::vector<double>& nodes) {
    // Fornberg's recursion, first derivative only.
    const std::size_t m = nodes.size();
    std::vector<std::vector<double>> w(m, std::vector<double>(2, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    w[0][0] = 1.0;
    for (std::size_t i = 1; i < m; ++i) {
        const std::size_t mn = std::min<std::size_t>(i, 1);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) w[i][k] = c1 * (k * w[i - 1][k - 1] - c5 * w[i - 1][k]) / c2;
                w[i][0] = -c1 * c5 * w[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) w[j][k] = (c4 * w[j][k] - k * w[j][k - 1]) / c3;
            w[j][0] = c4 * w[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = w[i][1];
    return out;
}

ReactionResidual reaction_residual(const FlowTrace& trace, double t_limit) {
    const PinchingParams& p = trace.params;
    const double nc = p.n * p.c;
    std::vector<double> ts, H, h2;
    for (const TraceSample& s : trace.samples) {
        if (std::holds_alternative<Axisymmetric>(s.state)) {
            fail(ErrorCode::InvalidArgument, "reaction residuals need a homogeneous trace");
        }
        const CurvatureData d = curvature_of(s.state, p).samples.front();
        ts.push_back(s.t);
        H.push_back(d.H);
        h2.push_back(d.h_norm2);
    }
    ReactionResidual out;
    for (std::size_t k = 2; k + 2 < ts.size(); ++k) {
        if (ts[k + 2] > t_limit) break;
        const std::vector<double> nodes(ts.begin() + static_cast<long>(k) - 2, ts.begin() + static_cast<long>(k) + 3);
        const std::vector<double> w = fd_weights(ts[k], nodes);
        double dH = 0.0, dh2 = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            dH += w[j] * H[k - 2 + j];
            dh2 += w[j] * h2[k - 2 + j];
        }
        const double rH = H[k] * (h2[k] + nc);
        const double rh2 = 4.0 * p.c * H[k] * H[k] + 2.0 * h2[k] * h2[k] - 2.0 * nc * h2[k];
        if (std::abs(rH) > 0.0) out.H_rel = std::max(out.H_rel, std::abs(dH - rH) / std::abs(rH));
        if (std::abs(rh2) > 0.0) out.h2_rel = std::max(out.h2_rel, std::abs(dh2 - rh2) / std::abs(rh2));
        ++out.points;
    }
    return out;
}

ProductSn1S1 boundary_product(const Thresholds& t) {
    return ProductSn1S1{product_boundary_lambda(std::sqrt(t.x0()), t.params())};
}

std::vector<CheckReport> check_flow_oracles(const PinchingParams& p) {
    const Thresholds t(p);
    const int n = p.n;
    const double c = p.c;
    std::vector<CheckReport> out;

    // Product torus from the boundary of the pinching region.
    const ProductSn1S1 start = boundary_product(t);
    const double r0 = product_r1sq(start, c);
    const ProductCollapse pc = product_collapse(p, r0);
    {
        Tally r("flow.product", t, 0);
        FlowConfig cfg;
        cfg.tol = 1e-12;
        cfg.t_max = 2.0 * pc.T;
        const FlowTrace num = flow_ode_numeric(start, p, cfg);
        double worst = 0.0;
        for (const MonitorRecord& m : num.monitors) {
            if (m.t > 0.99 * pc.T) break;
            worst = std::max(worst, std::abs(m.param - product_exact_r1sq(p, r0, m.t)));
        }
        r.margin(-worst * c, 0.0);
        if (worst > 1e-8 / c) r.failure("r1^2 deviates by " + fmt(worst));
        if (num.terminal.kind != TerminalKind::GreatCircleCollapse) r.failure("no great-circle collapse");
        const double dT = std::abs(num.terminal.T - pc.T);
        if (dT > 1e-7 / c) r.failure("collapse time off by " + fmt(dT));
        r.note("max |dr1^2| " + fmt(worst) + ", |dT| " + fmt(dT));
        out.push_back(r.finish());

        Tally w("flow.weak_equality", t, 0);
        FlowConfig ec;
        ec.t_max = 2.0 * pc.T;
        const FlowTrace exact = flow_product_exact(start, p, ec);
        for (const TraceSample& s : exact.samples) {
            const CurvatureData d = curvature_of(s.state, p).samples.front();
            const double g = t.gamma(d.H * d.H).value;
            const double e = std::abs(d.h_norm2 - g) / g;
            w.margin(-e, d.H * d.H);
            if (e > 1e-7) w.failure("|h|^2 leaves gamma by " + fmt(e) + " at t = " + fmt(s.t));
        }
        out.push_back(w.finish());
    }

    // Geodesic sphere of radius 1/sqrt(c).
    {
        Tally r("flow.sphere", t, 0);
        const double rho0 = 1.0 / std::sqrt(c);
        const double T = -std::log(std::cos(1.0)) / (n * c);
        FlowConfig cfg;
        cfg.tol = 1e-12;
        cfg.t_max = 2.0 * T;
        const FlowTrace num = flow_ode_numeric(GeodesicSphere{rho0}, p, cfg);
        double worst = 0.0;
        bool strict = true;
        for (const MonitorRecord& m : num.monitors) {
            if (!(m.U_max < 0.0)) strict = false;
            if (m.t > 0.99 * T) continue;
            const double exact = std::acos(std::cos(1.0) * std::exp(n * c * m.t)) / std::sqrt(c);
            worst = std::max(worst, std::abs(m.param - exact));
        }
        r.margin(-worst * std::sqrt(c), 0.0);
        if (worst > 1e-8 / std::sqrt(c)) r.failure("radius deviates by " + fmt(worst));
        if (num.terminal.kind != TerminalKind::RoundPoint) r.failure("no round point");
        const double dT = std::abs(num.terminal.T - T);
        if (dT > 1e-7 / c) r.failure("collapse time off by " + fmt(dT));
        if (!strict) r.failure("U_max became nonnegative");
        r.note("max |drho| " + fmt(worst) + ", |dT| " + fmt(dT));
        out.push_back(r.finish());
    }

    // Minimal product torus is stationary.
    {
        Tally r("flow.minimal", t, 0);
        const double A = (n - 1.0) / (n * c);
        FlowConfig cfg;
        cfg.tol = 1e-12;
        cfg.t_max = 1.0 / c;
        const FlowTrace num = flow_ode_numeric(product_from_r1sq(A, c), p, cfg);
        double drift = 0.0;
        for (const MonitorRecord& m : num.monitors) drift = std::max(drift, std::abs(m.param - A));
        r.margin(-drift * c, 0.0);
        if (drift > 1e-10 / c) r.failure("drift " + fmt(drift));
        if (num.terminal.kind != TerminalKind::HorizonReached) r.failure("minimal torus did not persist");
        out.push_back(r.finish());
    }

    // Reaction equations along the homogeneous solutions.
    {
        Tally r("flow.reaction", t, 0);
        FlowConfig cfg;
        cfg.tol = 1e-12;
        cfg.t_max = 2.0 * pc.T;
        cfg.dt_max = pc.T / 1000.0;
        const ReactionResidual prod = reaction_residual(flow_ode_numeric(start, p, cfg), 0.9 * pc.T);
        const double T = -std::log(std::cos(1.0)) / (n * c);
        cfg.t_max = 2.0 * T;
        cfg.dt_max = T / 1000.0;
        const ReactionResidual sph = reaction_residual(flow_ode_numeric(GeodesicSphere{1.0 / std::sqrt(c)}, p, cfg), 0.9 * T);
        const double worst = std::max({prod.H_rel, prod.h2_rel, sph.H_rel, sph.h2_rel});
        r.margin(-worst, 0.0);
        if (worst > 1e-6) r.failure("reaction mismatch " + fmt(worst));
        if (prod.points < 10 || sph.points < 10) r.failure("too few samples for the differences");
        r.note("product " + fmt(std::max(prod.H_rel, prod.h2_rel)) + ", sphere " + fmt(std::max(sph.H_rel, sph.h2_rel)));
        out.push_back(r.finish());
    }
    return out;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("PINCHFLOW_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::vector<CheckReport> run_suite(const SuiteOptions& options) {
    if (options.dimensions.empty() || options.curvatures.empty()) {
        fail(ErrorCode::InvalidArgument, "suite needs at least one dimension and one curvature");
    }
    std::vector<std::function<std::vector<CheckReport>()>> tasks;
    for (int n : options.dimensions) {
        for (double c : options.curvatures) {
            const PinchingParams p = PinchingParams::make(n, c);
            tasks.emplace_back([p, &options] {
                const Thresholds t(p);
                std::vector<CheckReport> out = check_gamma_properties(t, options.grid);
                auto add = [&](std::vector<CheckReport> more) {
                    for (CheckReport& r : more) out.push_back(std::move(r));
                };
                add(check_alpha_identities(t, options.grid));
                out.push_back(check_phi1(t, options.grid));
                add(check_omega_properties(t, options.grid));
                out.push_back(check_constants(t));
                out.push_back(check_gamma_lower_bound(t, options.grid));
                out.push_back(check_alpha_minimum(t, options.grid));
                out.push_back(check_derivatives(t, options.seed));
                return out;
            });
            if (options.include_flows) tasks.emplace_back([p] { return check_flow_oracles(p); });
        }
        const PinchingParams p = PinchingParams::make(n, options.curvatures.front());
        tasks.emplace_back([p, &options] {
            return std::vector<CheckReport>{check_okumura(p, options.seed, options.okumura_samples)};
        });
    }

    std::vector<std::vector<CheckReport>> results(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                results[i] = tasks[i]();
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned threads =
        std::max(1u, std::min<unsigned>(options.threads > 0 ? options.threads : default_thread_count(),
                                        static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();

    std::vector<CheckReport> all;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!errors[i].empty()) fail(ErrorCode::CheckFailure, "suite task failed: " + errors[i]);
        for (CheckReport& r : results[i]) all.push_back(std::move(r));
    }
    return all;
}

} // namespace pinchflow
