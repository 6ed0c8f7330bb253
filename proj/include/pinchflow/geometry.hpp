#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "pinchflow/thresholds.hpp"

namespace pinchflow {

/// Round hypersurface at geodesic distance rho from a point; inward normal.
struct GeodesicSphere {
    double rho = 0.0;
};

/// S^{n-1}(r1) x S^1(r2) with r1^2 = 1/(c + lambda^2), where lambda is the
/// (n-1)-fold principal curvature and -c/lambda the simple one.
struct ProductSn1S1 {
    double lambda = 0.0;
};

enum class ProfileTopology {
    Torus,  // closed curve away from the rotation axis
    Sphere, // arc whose two endpoints sit on the axis (phi = 0)
};

const char* to_string(ProfileTopology topology) noexcept;

/// Hypersurface invariant under O(n) acting on the first n ambient
/// coordinates, generated by a curve (phi, xi) in the orbit space through
///   X = (sin(phi) * omega, cos(phi) cos(xi), cos(phi) sin(xi)) / sqrt(c).
/// Samples are read as a uniform parametrization of that curve.
struct Axisymmetric {
    std::vector<std::array<double, 2>> profile;
    ProfileTopology topology = ProfileTopology::Torus;
    int grid_size = 0; // working resolution for the flow; 0 keeps profile.size()
};

using HypersurfaceState = std::variant<GeodesicSphere, ProductSn1S1, Axisymmetric>;

struct PrincipalCurvature {
    double value = 0.0;
    int multiplicity = 1;
};

struct CurvatureData {
    double H = 0.0;
    double h_norm2 = 0.0;
    double h0_norm2 = 0.0;
    std::vector<PrincipalCurvature> principal;
    double W = 0.0;
    double ricci_lb = 0.0;
};

/// Curvature of a whole state. Homogeneous families produce a single sample
/// at s = 0; profiles produce one per curve sample together with |grad H|^2.
struct StateCurvature {
    std::vector<double> s;
    std::vector<CurvatureData> samples;
    std::vector<double> grad_H2;
};

/// Builds H, |h|^2, the traceless norm, W and the Ricci bound from principal
/// curvatures. Multiplicities must add up to n.
CurvatureData curvature_from_principal(std::vector<PrincipalCurvature> principal,
                                       const PinchingParams& p);

StateCurvature curvature_of(const HypersurfaceState& state, const PinchingParams& p);

/// Throws GeometryError (or NonEmbedded for profiles) when the state is
/// outside its family.
void validate_state(const HypersurfaceState& state, const PinchingParams& p);

double simons_W(const CurvatureData& data, const PinchingParams& p);

struct RicciBound {
    double bound = 0.0;
    std::optional<double> witness; // (n-1)/n * eps * omega when |h|^2 < gamma - eps*omega
};

RicciBound ricci_lower_bound(const CurvatureData& data, const PinchingParams& p);
RicciBound ricci_lower_bound(const CurvatureData& data, const Thresholds& t, double epsilon);

enum class PinchingKind { Strict, WeakEquality, Violated };

const char* to_string(PinchingKind kind) noexcept;

struct PinchingClass {
    PinchingKind kind = PinchingKind::Strict;
    double margin = 0.0; // gamma(H^2) - |h|^2; negative margin is the excess
};

inline constexpr double kWeakEqualityTolerance = 1e-8;

PinchingClass classify_pinching(const CurvatureData& data, const Thresholds& t);
/// Worst case over all samples of a state.
PinchingClass classify_pinching(const StateCurvature& curvature, const Thresholds& t);

// Product family helpers.
double product_r1sq(const ProductSn1S1& state, double c);
ProductSn1S1 product_from_r1sq(double r1sq, double c);
/// lambda on the branch where |h|^2 = alpha(H^2), reconstructed from |H|.
double product_boundary_lambda(double H, const PinchingParams& p);

} // namespace pinchflow
