//! Closed-form solutions, radial classification, trajectory surfaces and the
//! action of shifts on trajectory parameters.
#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "curvedmag/dynamics.hpp"
#include "curvedmag/geometry.hpp"

namespace curvedmag {

//! a x^2 + b x + c in x = cosh r (H3) or x = cos r (S3).
struct RadialQuadratic {
    double a = 0;
    double b = 0;
    double c = 0;
    double disc = 0;
    bool double_root = false;  // |disc| below the degeneracy threshold
    std::optional<std::pair<double, double>> roots;
};

enum class RadialClass {
    FixedRadius,
    FiniteTwoTurning,
    InfiniteCritical,
    InfiniteOneTurning,
    SphericalFinite,
    NonPhysical,
};

enum class AxialClass { TypeI, TypeII, CriticalPlane, CriticalExp, NonPhysical };

struct TrajectoryClass {
    RadialClass radial = RadialClass::NonPhysical;
    AxialClass axial = AxialClass::NonPhysical;

    bool physical() const {
        return radial != RadialClass::NonPhysical && axial != AxialClass::NonPhysical;
    }
};

std::string_view to_string(RadialClass c);
std::string_view to_string(AxialClass c);

struct FixedRadiusOrbit {
    double i_phi = 0;
    double alpha = 0;  // constant azimuthal rate in the plane z = 0
    double a_transverse = 0;
};

//! H3: j = I + B, c_par^2 = (I + B)^2 + A - B^2, invariant j^2 - c^2 = B^2 - A.
//! S3: j = B - I, c_par^2 = A + B^2 - (I - B)^2, invariant j^2 + c^2 = A + B^2.
struct CanonicalParams {
    double j = 0;
    double c_par = 0;
    double invariant_value = 0;
};

//! sign: the +- of the axial quadrature. sheet: number of axial turning points
//! passed (S3), or 0 = approaching / 1 = receding from the turning point (H3 type II).
struct AxialBranch {
    int sign = 1;
    int sheet = 0;
};

RadialQuadratic radial_quadratic(SpaceModel m, double B, double I, double A);

//! z0 only separates the two critical cases epsilon = A in H3.
TrajectoryClass classify(SpaceModel m, double B, double I, double A, double epsilon,
                         std::optional<double> z0 = std::nullopt);

FixedRadiusOrbit fixed_radius_orbit(SpaceModel m, double B, double r0);

//! sinh z(t) (H3) or sin z(t) (S3). Type I and S3 cross z = 0 at t = 0, type II
//! sits at its turning point at t = 0. For epsilon = A the start height is z0.
double axial_solution(SpaceModel m, double epsilon, double A, double t, int sign, double z0);

//! Integral of dt / g(z(t)) along the axial solution, g = cosh^2 z or cos^2 z.
double transverse_time(SpaceModel m, double epsilon, double A, double t, int sign, double z0);

//! phi(t) - phi0 for constant alpha = g(z) dphi/dt (fixed-radius orbits).
double azimuth_solution(SpaceModel m, double epsilon, double A, double alpha, double t, int sign,
                        double z0);

//! Radial phase of a state, for use with radial_solution and the F(r, z) surface.
double radial_phase(SpaceModel m, double B, double I, double A, double r0, double vr0);

//! x(t) = cosh r(t) or cos r(t), time measured from a z = 0 crossing.
double radial_solution(SpaceModel m, double B, double I, double A, double epsilon, double t,
                       double phase);

//! Azimuth of the surface F(r, phi) = 0 through a given state.
double rphi_offset(SpaceModel m, double B, const CylState& s);

double trajectory_surface_rphi(SpaceModel m, double B, double I, double A, const CylPoint& p,
                               double phi_offset);

//! Axial phase: the transverse time elapsed since the reference point of the
//! axial motion, as a function of z on the given branch.
double axial_phase(SpaceModel m, double epsilon, double A, double z, const AxialBranch& br);

struct RzAnchor {
    double phase = 0;
    AxialBranch branch;
};

RzAnchor rz_anchor(SpaceModel m, double B, const CylState& s);

double trajectory_surface_rz(SpaceModel m, double B, double I, double A, double epsilon,
                             const CylPoint& p, const AxialBranch& br, double phase);

CanonicalParams canonical_parameters(SpaceModel m, double B, double I, double A);
CanonicalParams transform_parameters(SpaceModel m, const TransversalShift& s,
                                     const CanonicalParams& cp);

}  // namespace curvedmag
