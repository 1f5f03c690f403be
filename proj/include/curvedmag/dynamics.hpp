//! Equations of motion, integrals of motion and trajectory integration.
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "curvedmag/geometry.hpp"

namespace curvedmag {

//! Chart position with coordinate velocities (dr/dt, dphi/dt, dz/dt).
struct CylState {
    CylPoint point;
    double vr = 0;
    double vphi = 0;
    double vz = 0;
};

struct Acceleration {
    double ar = 0;
    double aphi = 0;
    double az = 0;
};

struct MotionConstants {
    double epsilon = 0;
    double i_phi = 0;
    double a_transverse = 0;
};

struct StepControl {
    enum class Mode { Fixed, Adaptive };

    Mode mode = Mode::Adaptive;
    double h = 1e-2;  // fixed-step size
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_min = 1e-12;
    double h_max = 0.1;

    static StepControl fixed(double h);
    static StepControl adaptive(double rel_tol = 1e-10, double abs_tol = 1e-12,
                                double h_min = 1e-12, double h_max = 0.1);
    void validate() const;
};

enum class Termination { Completed, SingularityAbort, StepUnderflow };

std::string_view to_string(Termination t);

struct Sample {
    double t = 0;
    CylState state;
};

//! Largest absolute deviation of each integral from its initial value.
struct Drift {
    double epsilon = 0;
    double i_phi = 0;
    double a_transverse = 0;

    double max() const;
};

struct Trajectory {
    std::vector<Sample> samples;
    MotionConstants initial;
    Drift drift;
    Termination termination = Termination::Completed;
    std::string reason;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

struct IntegrateOptions {
    std::size_t stride = 1;      // keep every stride-th accepted step (the last is always kept)
    double axis_guard = 1e-8;    // abort when r (or pi - r on S3) falls below this
    double pole_guard = 1e-8;    // S3: abort when pi/2 - |z| falls below this
};

Acceleration eom_rhs(SpaceModel m, double B, const CylState& s);
MotionConstants invariants_of(SpaceModel m, double B, const CylState& s);

Trajectory integrate(SpaceModel m, double B, const CylState& s0, double t_end,
                     const StepControl& ctl, const IntegrateOptions& opt = {});

//! lambda * B for lambda = mc^2/E in (0, 1).
double effective_relativistic_B(double B, double lambda);

//! Throws InvalidArgument unless epsilon < 1, as required in relativistic runs.
void require_subluminal(SpaceModel m, double B, const CylState& s);

//! State with prescribed integrals at radius r0 and height z0. The signs pick
//! the directions of dr/dt and dz/dt.
CylState state_from_integrals(SpaceModel m, double B, double I, double A, double epsilon,
                              double r0, double z0, double phi0, int sign_vr, int sign_vz);

//! Momentum form of the equations used internally by the integrator:
//! y = (r, phi, z, p_r, p_phi, p_z) with p_r = g_rr dr/dt, p_phi = g_phiphi dphi/dt,
//! p_z = dz/dt.
using PhaseVector = std::array<double, 6>;

PhaseVector to_phase(SpaceModel m, const CylState& s);
CylState from_phase(SpaceModel m, const PhaseVector& y);
PhaseVector phase_rhs(SpaceModel m, double B, const PhaseVector& y);
MotionConstants phase_invariants(SpaceModel m, double B, const PhaseVector& y);

//! dphi/dt and (dz/dt)^2 from the quadratures, given the integrals.
double quadrature_phi_rate(SpaceModel m, double B, double I, const CylPoint& p);
double quadrature_vz_squared(SpaceModel m, double epsilon, double A, const CylPoint& p);

}  // namespace curvedmag
