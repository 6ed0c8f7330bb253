#include "pinchflow/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pinchflow/error.hpp"
#include "pinchflow/profile.hpp"

namespace pinchflow {

const char* to_string(ProfileTopology topology) noexcept {
    return topology == ProfileTopology::Torus ? "torus" : "sphere";
}

const char* to_string(PinchingKind kind) noexcept {
    switch (kind) {
    case PinchingKind::Strict: return "Strict";
    case PinchingKind::WeakEquality: return "WeakEquality";
    case PinchingKind::Violated: return "Violated";
    }
    return "Unknown";
}

namespace {

double okumura_factor(int n) { return (n - 2.0) / std::sqrt(n * (n - 1.0)); }

double ricci_formula(const CurvatureData& d, int n, double c) {
    return (n - 1.0) / n *
           (n * c + 2.0 / n * d.H * d.H - d.h_norm2 - okumura_factor(n) * std::abs(d.H) * std::sqrt(d.h0_norm2));
}

} // namespace

CurvatureData curvature_from_principal(std::vector<PrincipalCurvature> principal, const PinchingParams& p) {
    int count = 0;
    CurvatureData d;
    double cubes = 0.0;
    for (const PrincipalCurvature& k : principal) {
        if (k.multiplicity < 1) fail(ErrorCode::InvalidArgument, "principal multiplicity must be positive");
        count += k.multiplicity;
        d.H += k.multiplicity * k.value;
        d.h_norm2 += k.multiplicity * k.value * k.value;
        cubes += k.multiplicity * k.value * k.value * k.value;
    }
    if (count != p.n) {
        fail(ErrorCode::InvalidArgument, "principal multiplicities add up to " + std::to_string(count) +
                                             ", expected n = " + std::to_string(p.n));
    }
    const double mean = d.H / p.n;
    for (const PrincipalCurvature& k : principal) {
        d.h0_norm2 += k.multiplicity * (k.value - mean) * (k.value - mean);
    }
    d.principal = std::move(principal);
    d.W = d.H * cubes - d.h_norm2 * d.h_norm2 + p.n * p.c * d.h0_norm2;
    d.ricci_lb = ricci_formula(d, p.n, p.c);
    return d;
}

void validate_state(const HypersurfaceState& state, const PinchingParams& p) {
    if (const auto* sphere = std::get_if<GeodesicSphere>(&state)) {
        const double limit = std::numbers::pi / std::sqrt(p.c);
        if (!(sphere->rho > 0.0 && sphere->rho < limit)) {
            std::ostringstream os;
            os << "geodesic radius " << sphere->rho << " outside (0, pi/sqrt(c)) = (0, " << limit << ")";
            fail(ErrorCode::GeometryError, os.str());
        }
    } else if (const auto* product = std::get_if<ProductSn1S1>(&state)) {
        if (!(product->lambda > 0.0) || !std::isfinite(product->lambda)) {
            std::ostringstream os;
            os << "product principal curvature lambda must be positive, got " << product->lambda;
            fail(ErrorCode::GeometryError, os.str());
        }
    } else {
        (void)to_curve(std::get<Axisymmetric>(state));
    }
}

StateCurvature curvature_of(const HypersurfaceState& state, const PinchingParams& p) {
    StateCurvature out;
    if (const auto* sphere = std::get_if<GeodesicSphere>(&state)) {
        validate_state(state, p);
        const double rc = std::sqrt(p.c);
        // tan of the complement vanishes exactly on the equator
        const double k = rc * std::tan(0.5 * std::numbers::pi - rc * sphere->rho);
        out.s.push_back(0.0);
        out.samples.push_back(curvature_from_principal({{k, p.n}}, p));
        return out;
    }
    if (const auto* product = std::get_if<ProductSn1S1>(&state)) {
        validate_state(state, p);
        const double lambda = product->lambda;
        out.s.push_back(0.0);
        out.samples.push_back(curvature_from_principal({{lambda, p.n - 1}, {-p.c / lambda, 1}}, p));
        return out;
    }
    return curve_state_curvature(to_curve(std::get<Axisymmetric>(state)), p);
}

StateCurvature curve_state_curvature(const ProfileCurve& curve, const PinchingParams& p) {
    StateCurvature out;
    const std::vector<ProfilePoint> points = curve_curvature(curve, p.n, p.c);
    out.s.reserve(points.size());
    out.samples.reserve(points.size());
    out.grad_H2.reserve(points.size());
    for (const ProfilePoint& q : points) {
        out.s.push_back(q.s);
        out.samples.push_back(curvature_from_principal({{q.k_profile, 1}, {q.k_orbit, p.n - 1}}, p));
        out.grad_H2.push_back(q.dH_ds * q.dH_ds);
    }
    return out;
}

double simons_W(const CurvatureData& data, const PinchingParams& p) {
    double cubes = 0.0;
    for (const PrincipalCurvature& k : data.principal) cubes += k.multiplicity * k.value * k.value * k.value;
    return data.H * cubes - data.h_norm2 * data.h_norm2 + p.n * p.c * data.h0_norm2;
}

RicciBound ricci_lower_bound(const CurvatureData& data, const PinchingParams& p) {
    return {ricci_formula(data, p.n, p.c), std::nullopt};
}

RicciBound ricci_lower_bound(const CurvatureData& data, const Thresholds& t, double epsilon) {
    RicciBound r = ricci_lower_bound(data, t.params());
    const double x = data.H * data.H;
    const double omega = t.omega(x).value;
    if (data.h_norm2 < t.gamma(x).value - epsilon * omega) {
        r.witness = (t.n() - 1.0) / t.n() * epsilon * omega;
    }
    return r;
}

PinchingClass classify_pinching(const CurvatureData& data, const Thresholds& t) {
    const double x = data.H * data.H;
    const double margin = t.gamma(x).value - data.h_norm2;
    if (std::abs(margin) <= kWeakEqualityTolerance * (x + t.c())) return {PinchingKind::WeakEquality, margin};
    return {margin > 0.0 ? PinchingKind::Strict : PinchingKind::Violated, margin};
}

PinchingClass classify_pinching(const StateCurvature& curvature, const Thresholds& t) {
    PinchingClass worst{PinchingKind::Strict, INFINITY};
    for (const CurvatureData& d : curvature.samples) {
        const PinchingClass k = classify_pinching(d, t);
        if (static_cast<int>(k.kind) > static_cast<int>(worst.kind) ||
            (k.kind == worst.kind && k.margin < worst.margin)) {
            worst = k;
        }
    }
    return worst;
}

double product_r1sq(const ProductSn1S1& state, double c) { return 1.0 / (c + state.lambda * state.lambda); }

ProductSn1S1 product_from_r1sq(double r1sq, double c) {
    if (!(r1sq > 0.0 && r1sq < 1.0 / c)) {
        std::ostringstream os;
        os << "r1^2 = " << r1sq << " outside (0, 1/c)";
        fail(ErrorCode::DomainError, os.str());
    }
    return {std::sqrt(1.0 / r1sq - c)};
}

double product_boundary_lambda(double H, const PinchingParams& p) {
    return (std::abs(H) + std::sqrt(H * H + 4.0 * (p.n - 1.0) * p.c)) / (2.0 * (p.n - 1.0));
}

} // namespace pinchflow
