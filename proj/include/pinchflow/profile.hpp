#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pinchflow/geometry.hpp"

namespace pinchflow {

using Vec3 = std::array<double, 3>;

/// Profile curve stored as points on the unit 2-sphere,
///   (u, v, w) = (sin phi, cos phi cos xi, cos phi sin xi),
/// so u is the distance-like coordinate to the rotation axis u = 0.
struct ProfileCurve {
    std::vector<Vec3> points;
    ProfileTopology topology = ProfileTopology::Torus;
};

struct ProfilePoint {
    double s = 0.0;         // ambient arclength from the first sample
    double k_profile = 0.0; // curvature of the generating curve, multiplicity 1
    double k_orbit = 0.0;   // curvature along the orbits, multiplicity n - 1
    double H = 0.0;
    double dH_ds = 0.0;
    Vec3 normal{};          // unit normal of the curve, tangent to the 2-sphere
};

/// Converts and validates: GeometryError when a sample leaves phi in (0, pi/2)
/// (sphere-type endpoints must have phi = 0), MeshDegenerate on repeated
/// points. The result is oriented so that curvatures carry the sign
/// conventions of the closed-form families.
ProfileCurve to_curve(const Axisymmetric& state);
Axisymmetric to_state(const ProfileCurve& curve, int grid_size = 0);

/// Reverses point order if needed; see the orientation rules in profile.cpp.
void orient(ProfileCurve& curve);

/// Fourth-order centered differences on the given samples, treated as a
/// uniform parametrization. Results are in ambient units for curvature c.
std::vector<ProfilePoint> curve_curvature(const ProfileCurve& curve, int n, double c);

/// Full curvature data of every sample, as curvature_of reports it.
StateCurvature curve_state_curvature(const ProfileCurve& curve, const PinchingParams& p);

/// Same, returning only the normal velocity factor H (unit sphere units) and
/// normals; used on the hot path of the flow.
void curve_velocity(const ProfileCurve& curve, int n, std::vector<double>& H_unit,
                    std::vector<Vec3>& normals);

/// Resamples to `count` points equally spaced in chord length using local
/// quintic interpolation, then projects back onto the sphere.
ProfileCurve redistribute(const ProfileCurve& curve, std::size_t count);

/// Smallest adjacent chord divided by the mean chord.
double spacing_ratio(const ProfileCurve& curve);

/// Throws NonEmbedded if two non-adjacent segments cross. The test runs in
/// the (v, w) plane, onto which the half-sphere u >= 0 projects injectively.
void check_embedded(const ProfileCurve& curve);

/// Largest u over the samples: sin of the widest orbit radius on the unit
/// sphere. Used as the scalar size of a profile in traces.
double max_u(const ProfileCurve& curve);

// Builders. Radii and angles are on the unit sphere; the ambient scale
// enters only through c when curvature is evaluated.

/// Latitude circle phi = const, the profile of a product torus.
Axisymmetric latitude_profile(double phi, int samples);
/// Circle phi(t) = phi0 (1 + amplitude cos(mode t)), redistributed.
Axisymmetric perturbed_latitude_profile(double phi0, double amplitude, int mode, int samples);
/// Half circle of geodesic radius r about (0, 1, 0): a geodesic sphere.
Axisymmetric cap_profile(double r, int samples);
/// Half circle with radius r (1 + amplitude cos(mode theta)), redistributed.
Axisymmetric perturbed_cap_profile(double r, double amplitude, int mode, int samples);

} // namespace pinchflow
