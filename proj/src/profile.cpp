#include "pinchflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pinchflow/error.hpp"

namespace pinchflow {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 reflect(const Vec3& a) { return {-a[0], a[1], a[2]}; }
Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

std::size_t minimum_samples(ProfileTopology topology) {
    return topology == ProfileTopology::Torus ? 8 : 6;
}

void require_samples(const ProfileCurve& curve) {
    if (curve.points.size() < minimum_samples(curve.topology)) {
        fail(ErrorCode::GeometryError, "profile needs at least " +
                                           std::to_string(minimum_samples(curve.topology)) +
                                           " samples, got " + std::to_string(curve.points.size()));
    }
}

// Samples beyond the ends: periodic for tori, mirrored through the axis
// plane u = 0 for sphere-type arcs (the curve meets the axis orthogonally).
Vec3 point_at(const ProfileCurve& curve, long i) {
    const long N = static_cast<long>(curve.points.size());
    if (curve.topology == ProfileTopology::Torus) {
        return curve.points[static_cast<std::size_t>(i - floor_div(i, N) * N)];
    }
    if (i < 0) return reflect(curve.points[static_cast<std::size_t>(-i)]);
    if (i > N - 1) return reflect(curve.points[static_cast<std::size_t>(2 * (N - 1) - i)]);
    return curve.points[static_cast<std::size_t>(i)];
}

double scalar_at(const std::vector<double>& f, ProfileTopology topology, long i) {
    const long N = static_cast<long>(f.size());
    if (topology == ProfileTopology::Torus) return f[static_cast<std::size_t>(i - floor_div(i, N) * N)];
    if (i < 0) return f[static_cast<std::size_t>(-i)];
    if (i > N - 1) return f[static_cast<std::size_t>(2 * (N - 1) - i)];
    return f[static_cast<std::size_t>(i)];
}

struct LocalFrame {
    double speed = 0.0;
    double k_profile = 0.0; // unit sphere
    double k_orbit = 0.0;
    Vec3 normal{};
};

LocalFrame frame_at(const ProfileCurve& curve, long i) {
    const Vec3 pm2 = point_at(curve, i - 2);
    const Vec3 pm1 = point_at(curve, i - 1);
    const Vec3 p0 = point_at(curve, i);
    const Vec3 pp1 = point_at(curve, i + 1);
    const Vec3 pp2 = point_at(curve, i + 2);
    Vec3 d1{};
    Vec3 d2{};
    for (int k = 0; k < 3; ++k) {
        d1[k] = (-pp2[k] + 8.0 * pp1[k] - 8.0 * pm1[k] + pm2[k]) / 12.0;
        d2[k] = (-pp2[k] + 16.0 * pp1[k] - 30.0 * p0[k] + 16.0 * pm1[k] - pm2[k]) / 12.0;
    }
    LocalFrame f;
    f.speed = norm(d1);
    if (!(f.speed > 0.0)) {
        fail(ErrorCode::MeshDegenerate, "profile has zero tangent at sample " + std::to_string(i));
    }
    f.normal = normalized(cross((1.0 / f.speed) * d1, p0));
    f.k_profile = dot(d2, f.normal) / (f.speed * f.speed);
    const long N = static_cast<long>(curve.points.size());
    const bool on_axis = curve.topology == ProfileTopology::Sphere && (i == 0 || i == N - 1);
    f.k_orbit = on_axis ? f.k_profile : -f.normal[0] / p0[0];
    return f;
}

double shoelace(const std::vector<std::array<double, 2>>& poly) {
    double area = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        area += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * area;
}

// Torus: counterclockwise in the gnomonic chart (v/u, w/u) about the pole
// u = 1. Sphere-type: the arc closed by the shorter boundary arc of the
// (v, w) disc must run clockwise. Both rules give the normal T x P for which
// latitude circles have k_orbit = cot(phi) > 0 and caps have k = cot(r) > 0.
double orientation_area(const ProfileCurve& curve) {
    std::vector<std::array<double, 2>> poly;
    if (curve.topology == ProfileTopology::Torus) {
        for (const Vec3& p : curve.points) poly.push_back({p[1] / p[0], p[2] / p[0]});
        return shoelace(poly);
    }
    for (const Vec3& p : curve.points) poly.push_back({p[1], p[2]});
    const Vec3& first = curve.points.front();
    const Vec3& last = curve.points.back();
    const double a_last = std::atan2(last[2], last[1]);
    const double a_first = std::atan2(first[2], first[1]);
    const double sweep = std::remainder(a_first - a_last, 2.0 * kPi);
    constexpr int closing = 64;
    for (int k = 1; k < closing; ++k) {
        const double a = a_last + sweep * k / closing;
        poly.push_back({std::cos(a), std::sin(a)});
    }
    return -shoelace(poly);
}

double chord_angle(const Vec3& a, const Vec3& b) { return 2.0 * std::asin(std::min(1.0, 0.5 * norm(a - b))); }

bool segments_cross(const std::array<double, 2>& p1, const std::array<double, 2>& p2,
                    const std::array<double, 2>& q1, const std::array<double, 2>& q2) {
    auto orient2 = [](const std::array<double, 2>& a, const std::array<double, 2>& b,
                      const std::array<double, 2>& c) {
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    };
    const double d1 = orient2(q1, q2, p1);
    const double d2 = orient2(q1, q2, p2);
    const double d3 = orient2(p1, p2, q1);
    const double d4 = orient2(p1, p2, q2);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

Vec3 orbit_to_point(double phi, double xi) {
    return {std::sin(phi), std::cos(phi) * std::cos(xi), std::cos(phi) * std::sin(xi)};
}

} // namespace

ProfileCurve to_curve(const Axisymmetric& state) {
    ProfileCurve curve;
    curve.topology = state.topology;
    curve.points.reserve(state.profile.size());
    const std::size_t N = state.profile.size();
    for (std::size_t i = 0; i < N; ++i) {
        const double phi = state.profile[i][0];
        const double xi = state.profile[i][1];
        if (!std::isfinite(phi) || !std::isfinite(xi)) {
            fail(ErrorCode::GeometryError, "profile sample " + std::to_string(i) + " is not finite");
        }
        const bool endpoint = state.topology == ProfileTopology::Sphere && (i == 0 || i + 1 == N);
        if (endpoint) {
            if (std::abs(phi) > 1e-12) {
                std::ostringstream os;
                os << "sphere-type profile must start and end on the axis (phi = 0), sample " << i
                   << " has phi = " << phi;
                fail(ErrorCode::GeometryError, os.str());
            }
            curve.points.push_back({0.0, std::cos(xi), std::sin(xi)});
            continue;
        }
        if (!(phi > 0.0 && phi < 0.5 * kPi)) {
            std::ostringstream os;
            os << "profile sample " << i << " has phi = " << phi << " outside (0, pi/2)";
            fail(ErrorCode::GeometryError, os.str());
        }
        curve.points.push_back(orbit_to_point(phi, xi));
    }
    require_samples(curve);
    const std::size_t segments = curve.topology == ProfileTopology::Torus ? N : N - 1;
    for (std::size_t i = 0; i < segments; ++i) {
        if (norm(curve.points[i] - curve.points[(i + 1) % N]) < 1e-14) {
            fail(ErrorCode::MeshDegenerate, "profile samples " + std::to_string(i) + " and " +
                                                std::to_string((i + 1) % N) + " coincide");
        }
    }
    check_embedded(curve);
    orient(curve);
    return curve;
}

Axisymmetric to_state(const ProfileCurve& curve, int grid_size) {
    Axisymmetric state;
    state.topology = curve.topology;
    state.grid_size = grid_size;
    state.profile.reserve(curve.points.size());
    for (const Vec3& p : curve.points) {
        state.profile.push_back({std::atan2(p[0], std::hypot(p[1], p[2])), std::atan2(p[2], p[1])});
    }
    return state;
}

void orient(ProfileCurve& curve) {
    if (orientation_area(curve) < 0.0) std::reverse(curve.points.begin(), curve.points.end());
}

std::vector<ProfilePoint> curve_curvature(const ProfileCurve& curve, int n, double c) {
    require_samples(curve);
    const long N = static_cast<long>(curve.points.size());
    const double rc = std::sqrt(c);
    std::vector<ProfilePoint> out(static_cast<std::size_t>(N));
    std::vector<double> H_unit(static_cast<std::size_t>(N));
    std::vector<double> speed(static_cast<std::size_t>(N));
    double s = 0.0;
    for (long i = 0; i < N; ++i) {
        const LocalFrame f = frame_at(curve, i);
        ProfilePoint& p = out[static_cast<std::size_t>(i)];
        if (i > 0) s += chord_angle(curve.points[static_cast<std::size_t>(i - 1)], curve.points[static_cast<std::size_t>(i)]);
        p.s = s / rc;
        p.k_profile = rc * f.k_profile;
        p.k_orbit = rc * f.k_orbit;
        p.normal = f.normal;
        H_unit[static_cast<std::size_t>(i)] = f.k_profile + (n - 1) * f.k_orbit;
        p.H = rc * H_unit[static_cast<std::size_t>(i)];
        speed[static_cast<std::size_t>(i)] = f.speed;
    }
    for (long i = 0; i < N; ++i) {
        auto h = [&](long j) { return scalar_at(H_unit, curve.topology, j); };
        const double dH = (-h(i + 2) + 8.0 * h(i + 1) - 8.0 * h(i - 1) + h(i - 2)) / 12.0;
        out[static_cast<std::size_t>(i)].dH_ds = c * dH / speed[static_cast<std::size_t>(i)];
    }
    return out;
}

void curve_velocity(const ProfileCurve& curve, int n, std::vector<double>& H_unit,
                    std::vector<Vec3>& normals) {
    require_samples(curve);
    const long N = static_cast<long>(curve.points.size());
    H_unit.resize(static_cast<std::size_t>(N));
    normals.resize(static_cast<std::size_t>(N));
    for (long i = 0; i < N; ++i) {
        const LocalFrame f = frame_at(curve, i);
        H_unit[static_cast<std::size_t>(i)] = f.k_profile + (n - 1) * f.k_orbit;
        normals[static_cast<std::size_t>(i)] = f.normal;
    }
}

ProfileCurve redistribute(const ProfileCurve& curve, std::size_t count) {
    require_samples(curve);
    const long N = static_cast<long>(curve.points.size());
    const bool torus = curve.topology == ProfileTopology::Torus;
    if (count < minimum_samples(curve.topology)) {
        fail(ErrorCode::InvalidArgument, "cannot resample a profile to " + std::to_string(count) + " points");
    }

    std::vector<double> s(static_cast<std::size_t>(N) + 1, 0.0);
    for (long i = 1; i <= N; ++i) {
        if (!torus && i == N) break;
        s[static_cast<std::size_t>(i)] =
            s[static_cast<std::size_t>(i - 1)] + norm(point_at(curve, i) - point_at(curve, i - 1));
    }
    const double L = torus ? s[static_cast<std::size_t>(N)] : s[static_cast<std::size_t>(N - 1)];
    auto param_at = [&](long i) -> double {
        if (torus) {
            const long k = floor_div(i, N);
            return s[static_cast<std::size_t>(i - k * N)] + static_cast<double>(k) * L;
        }
        if (i < 0) return -s[static_cast<std::size_t>(-i)];
        if (i > N - 1) return 2.0 * L - s[static_cast<std::size_t>(2 * (N - 1) - i)];
        return s[static_cast<std::size_t>(i)];
    };

    ProfileCurve out;
    out.topology = curve.topology;
    out.points.resize(count);
    const double spacing = torus ? L / static_cast<double>(count) : L / static_cast<double>(count - 1);
    long seg = 0;
    for (std::size_t j = 0; j < count; ++j) {
        if (!torus && (j == 0 || j + 1 == count)) {
            Vec3 end = j == 0 ? curve.points.front() : curve.points.back();
            end[0] = 0.0;
            out.points[j] = normalized(end);
            continue;
        }
        const double target = spacing * static_cast<double>(j);
        while (seg + 1 < N && param_at(seg + 1) <= target) ++seg;
        double x[6];
        Vec3 y[6];
        for (int m = 0; m < 6; ++m) {
            x[m] = param_at(seg - 2 + m);
            y[m] = point_at(curve, seg - 2 + m);
        }
        Vec3 value{0.0, 0.0, 0.0};
        for (int m = 0; m < 6; ++m) {
            double weight = 1.0;
            for (int q = 0; q < 6; ++q) {
                if (q != m) weight *= (target - x[q]) / (x[m] - x[q]);
            }
            value = value + weight * y[m];
        }
        out.points[j] = normalized(value);
    }
    return out;
}

double spacing_ratio(const ProfileCurve& curve) {
    const std::size_t N = curve.points.size();
    const std::size_t segments = curve.topology == ProfileTopology::Torus ? N : N - 1;
    double lo = INFINITY;
    double total = 0.0;
    for (std::size_t i = 0; i < segments; ++i) {
        const double d = norm(curve.points[(i + 1) % N] - curve.points[i]);
        lo = std::min(lo, d);
        total += d;
    }
    return lo / (total / static_cast<double>(segments));
}

void check_embedded(const ProfileCurve& curve) {
    const std::size_t N = curve.points.size();
    const bool torus = curve.topology == ProfileTopology::Torus;
    const std::size_t segments = torus ? N : N - 1;
    std::vector<std::array<double, 2>> q(N);
    for (std::size_t i = 0; i < N; ++i) q[i] = {curve.points[i][1], curve.points[i][2]};
    for (std::size_t a = 0; a < segments; ++a) {
        for (std::size_t b = a + 2; b < segments; ++b) {
            if (torus && a == 0 && b == N - 1) continue;
            if (segments_cross(q[a], q[(a + 1) % N], q[b], q[(b + 1) % N])) {
                fail(ErrorCode::NonEmbedded, "profile segments " + std::to_string(a) + " and " +
                                                 std::to_string(b) + " intersect");
            }
        }
    }
}

double max_u(const ProfileCurve& curve) {
    double m = 0.0;
    for (const Vec3& p : curve.points) m = std::max(m, p[0]);
    return m;
}

Axisymmetric latitude_profile(double phi, int samples) {
    Axisymmetric state;
    state.topology = ProfileTopology::Torus;
    state.grid_size = samples;
    for (int k = 0; k < samples; ++k) state.profile.push_back({phi, 2.0 * kPi * k / samples});
    return state;
}

Axisymmetric perturbed_latitude_profile(double phi0, double amplitude, int mode, int samples) {
    ProfileCurve fine;
    fine.topology = ProfileTopology::Torus;
    const int dense = 8 * samples;
    for (int k = 0; k < dense; ++k) {
        const double t = 2.0 * kPi * k / dense;
        fine.points.push_back(orbit_to_point(phi0 * (1.0 + amplitude * std::cos(mode * t)), t));
    }
    orient(fine);
    return to_state(redistribute(fine, static_cast<std::size_t>(samples)), samples);
}

namespace {

Vec3 cap_point(double r, double theta) {
    return {std::sin(r) * std::sin(theta), std::cos(r), std::sin(r) * std::cos(theta)};
}

} // namespace

Axisymmetric cap_profile(double r, int samples) {
    ProfileCurve curve;
    curve.topology = ProfileTopology::Sphere;
    for (int k = 0; k < samples; ++k) curve.points.push_back(cap_point(r, kPi * k / (samples - 1)));
    curve.points.front()[0] = 0.0;
    curve.points.back()[0] = 0.0;
    Axisymmetric state = to_state(curve, samples);
    state.profile.front()[0] = 0.0;
    state.profile.back()[0] = 0.0;
    return state;
}

Axisymmetric perturbed_cap_profile(double r, double amplitude, int mode, int samples) {
    ProfileCurve fine;
    fine.topology = ProfileTopology::Sphere;
    const int dense = 8 * samples;
    for (int k = 0; k < dense; ++k) {
        const double theta = kPi * k / (dense - 1);
        fine.points.push_back(cap_point(r * (1.0 + amplitude * std::cos(mode * theta)), theta));
    }
    fine.points.front()[0] = 0.0;
    fine.points.back()[0] = 0.0;
    Axisymmetric state = to_state(redistribute(fine, static_cast<std::size_t>(samples)), samples);
    state.profile.front()[0] = 0.0;
    state.profile.back()[0] = 0.0;
    return state;
}

} // namespace pinchflow
