//! Cross-check harness: randomized sweeps, closed form against integration,
//! finite-difference oracles and convergence orders.
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "curvedmag/analytic.hpp"
#include "curvedmag/dynamics.hpp"
#include "curvedmag/geometry.hpp"

namespace curvedmag::verify {

//! Upper: passed iff worst_error <= threshold. Lower: worst_error is the
//! smallest observed value and passed iff it is >= threshold.
enum class Bound { Upper, Lower };

struct CheckReport {
    std::string name;
    std::size_t samples = 0;
    double worst_error = 0;
    double threshold = 0;
    bool passed = false;
    Bound bound = Bound::Upper;
    std::uint64_t seed = 0;
    std::string details;  // worst-case input
    std::size_t rejected = 0;

    void finish();
};

std::string to_text(const CheckReport& r);
std::string to_kv(const CheckReport& r);

//! Accumulates the worst case over samples.
class Tracker {
public:
    Tracker(std::string name, double threshold, std::uint64_t seed, Bound bound = Bound::Upper);
    void add(double value, const std::string& input);
    void add_rejected(std::size_t n) { report_.rejected += n; }
    CheckReport finish();

private:
    CheckReport report_;
    bool any_ = false;
};

struct PhysicalCase {
    double B = 0;
    CylState state;
    MotionConstants constants;
    TrajectoryClass cls;

    std::string describe() const;
};

struct SamplerOptions {
    bool start_in_plane = false;  // z0 = 0
    bool need_surface_forms = false;
    bool require_type_one = false;  // epsilon > A
    double radial_margin = 1e-3;
};

//! Random physical initial states, redrawn until classification and margins allow a clean run.
class CaseSampler {
public:
    CaseSampler(SpaceModel m, std::uint64_t seed) : model_(m), rng_(seed) {}
    PhysicalCase next(const SamplerOptions& opt);
    std::size_t rejected() const { return rejected_; }
    double uniform(double lo, double hi);

private:
    SpaceModel model_;
    std::mt19937_64 rng_;
    std::size_t rejected_ = 0;
};

CheckReport run_conservation_sweep(SpaceModel m, std::size_t n_cases, double t_end,
                                   const StepControl& ctl, std::uint64_t seed = 42);

std::vector<CheckReport> run_closed_form_sweep(SpaceModel m, std::size_t n_cases,
                                               std::uint64_t seed = 42);

//! F(r, phi), F(r, z) and radial turning-point checks along integrated trajectories.
std::vector<CheckReport> run_surface_sweep(SpaceModel m, std::size_t n_cases,
                                           std::uint64_t seed = 42);

std::vector<CheckReport> run_symmetry_sweep(SpaceModel m, std::size_t n_cases,
                                            std::uint64_t seed = 42);

enum class ConvergenceCase { FixedRadiusHyperbolic, PeriodicSpherical };

//! Fixed-step error at t_end against the closed form for one step size.
double convergence_error(ConvergenceCase c, double h);

//! Least-squares slope of log error against log h.
double measure_convergence_order(ConvergenceCase c, const std::vector<double>& steps);

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

//! Position error of the scaled curved-space orbit against the flat cyclotron orbit.
double flat_limit_error(SpaceModel m, double scale);

//! Largest deviation of rescaled Christoffel symbols from their flat values.
double christoffel_flat_limit_error(SpaceModel m, const CylPoint& p, double scale);

struct PeriodMeasurement {
    std::vector<double> crossing_times;
    double worst_deviation = 0;  // max |t_{k+1} - t_k - expected|
};

//! Times where z changes sign, located by Newton iteration on fresh Runge-Kutta substeps.
PeriodMeasurement measure_axial_period(SpaceModel m, double B, const CylState& s0, double t_end,
                                       double expected, double rel_tol = 1e-12);

//! Finite-difference determinant of d(r, phi)/d(r', phi') for the inverse shift.
double fd_shift_determinant(SpaceModel m, const TransversalShift& s, const CylPoint& p_shifted,
                            double h = 1e-5);

}  // namespace curvedmag::verify
