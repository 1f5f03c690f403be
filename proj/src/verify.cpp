#include "curvedmag/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "curvedmag/field.hpp"
#include "curvedmag/ode.hpp"

namespace curvedmag::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string model_tag(SpaceModel m) { return std::string(to_string(m)); }

double radial_x(SpaceModel m, double r) {
    return m == SpaceModel::Hyperbolic ? std::cosh(r) : std::cos(r);
}

double wrap_pi(double a) { return std::remainder(a, 2.0 * kPi); }

StepControl tight() { return StepControl::adaptive(1e-12, 1e-14, 1e-14, 0.05); }

}  // namespace

void CheckReport::finish() {
    passed = bound == Bound::Upper ? worst_error <= threshold : worst_error >= threshold;
}

std::string to_text(const CheckReport& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst=" << fmt(r.worst_error)
       << (r.bound == Bound::Upper ? " <= " : " >= ") << fmt(r.threshold) << "  samples=" << r.samples
       << "  seed=" << r.seed;
    if (r.rejected) os << "  rejected=" << r.rejected;
    if (!r.passed && !r.details.empty()) os << "\n    worst case: " << r.details;
    return os.str();
}

std::string to_kv(const CheckReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "name=" << r.name << " passed=" << (r.passed ? "true" : "false") << " samples=" << r.samples
       << " worst_error=" << r.worst_error << " threshold=" << r.threshold
       << " bound=" << (r.bound == Bound::Upper ? "upper" : "lower") << " seed=" << r.seed
       << " rejected=" << r.rejected << " details=\"" << r.details << "\"";
    return os.str();
}

Tracker::Tracker(std::string name, double threshold, std::uint64_t seed, Bound bound) {
    report_.name = std::move(name);
    report_.threshold = threshold;
    report_.seed = seed;
    report_.bound = bound;
    report_.worst_error = bound == Bound::Upper ? 0.0 : std::numeric_limits<double>::infinity();
}

void Tracker::add(double value, const std::string& input) {
    ++report_.samples;
    const bool worse = std::isnan(value) ||
                       (report_.bound == Bound::Upper ? value > report_.worst_error
                                                      : value < report_.worst_error);
    if (!any_ || worse) {
        report_.worst_error = std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
        report_.details = input;
        any_ = true;
    }
}

CheckReport Tracker::finish() {
    report_.finish();
    return report_;
}

std::string PhysicalCase::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "B=" << B << " r=" << state.point.r << " phi=" << state.point.phi << " z=" << state.point.z
       << " vr=" << state.vr << " vphi=" << state.vphi << " vz=" << state.vz;
    return os.str();
}

double CaseSampler::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

PhysicalCase CaseSampler::next(const SamplerOptions& opt) {
    const bool hyp = model_ == SpaceModel::Hyperbolic;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        PhysicalCase pc;
        pc.B = uniform(-2.0, 2.0);
        const double r = hyp ? uniform(0.2, 1.5) : uniform(0.3, 2.8);
        const double z = opt.start_in_plane ? 0.0 : uniform(-0.5, 0.5);
        const double sr = hyp ? std::sinh(r) : std::sin(r);
        pc.state.point = {r, uniform(0.0, kTwoPi), z};
        pc.state.vr = uniform(-1.0, 1.0);
        pc.state.vphi = uniform(-1.0, 1.0) / sr;
        pc.state.vz = uniform(-1.0, 1.0);
        pc.constants = invariants_of(model_, pc.B, pc.state);
        const double eps = pc.constants.epsilon, A = pc.constants.a_transverse;
        const double I = pc.constants.i_phi;
        pc.cls = classify(model_, pc.B, I, A, eps, z);

        bool ok = pc.cls.physical() && A > 1e-4 && std::abs(eps - A) > 1e-3 * eps;
        if (ok && opt.require_type_one) ok = eps > A;
        if (ok && !hyp) ok = std::sqrt(A / eps) > 0.05;
        if (ok) {
            const RadialQuadratic q = radial_quadratic(model_, pc.B, I, A);
            ok = q.roots.has_value() && !q.double_root;
            if (ok) {
                const auto [x1, x2] = *q.roots;
                const double mg = opt.radial_margin;
                switch (pc.cls.radial) {
                    case RadialClass::FiniteTwoTurning: ok = x1 > 1.0 + mg && x2 - x1 > mg; break;
                    case RadialClass::InfiniteOneTurning: ok = x2 > 1.0 + mg; break;
                    case RadialClass::SphericalFinite:
                        ok = x1 > -1.0 + mg && x2 < 1.0 - mg && x2 - x1 > mg;
                        break;
                    default: ok = false;
                }
            }
        }
        if (ok && opt.need_surface_forms) {
            ok = std::abs(pc.state.vphi) > 1e-3 &&
                 canonical_parameters(model_, pc.B, I, A).c_par > 1e-3;
        }
        if (ok) return pc;
        ++rejected_;
    }
    throw Error(ErrorKind::InvalidArgument, "sampler could not find a physical case");
}

CheckReport run_conservation_sweep(SpaceModel m, std::size_t n_cases, double t_end,
                                   const StepControl& ctl, std::uint64_t seed) {
    if (n_cases < 1) throw Error(ErrorKind::InvalidArgument, "need at least one case");
    CaseSampler sampler(m, seed);
    Tracker tr("conservation/" + model_tag(m), 1e-7, seed);
    IntegrateOptions opt;
    opt.stride = 1u << 30;
    for (std::size_t k = 0; k < n_cases; ++k) {
        const PhysicalCase pc = sampler.next({});
        const Trajectory traj = integrate(m, pc.B, pc.state, t_end, ctl, opt);
        const double err = traj.termination == Termination::Completed
                               ? traj.drift.max()
                               : std::numeric_limits<double>::infinity();
        tr.add(err, pc.describe() + " termination=" + std::string(to_string(traj.termination)));
    }
    tr.add_rejected(sampler.rejected());
    return tr.finish();
}

namespace {

CylState fixed_radius_state(SpaceModel m, double B, double r0, double z0, double vz) {
    const FixedRadiusOrbit o = fixed_radius_orbit(m, B, r0);
    const double g = m == SpaceModel::Hyperbolic ? std::cosh(z0) * std::cosh(z0)
                                                  : std::cos(z0) * std::cos(z0);
    CylState s;
    s.point = {r0, 0.0, z0};
    s.vphi = o.alpha / g;
    s.vz = vz;
    return s;
}

// Sup-norm distance between integrated samples and closed forms for z, phi and r.
struct ClosedFormErrors {
    double axial = 0;
    double azimuth = 0;
    double radius = 0;
};

ClosedFormErrors compare_fixed_radius(SpaceModel m, double B, const CylState& s0, double t_end,
                                      int sign, double z_ref) {
    const MotionConstants mc = invariants_of(m, B, s0);
    const FixedRadiusOrbit o = fixed_radius_orbit(m, B, s0.point.r);
    const Trajectory traj = integrate(m, B, s0, t_end, tight());
    ClosedFormErrors e;
    if (traj.termination != Termination::Completed) {
        e.axial = e.azimuth = e.radius = std::numeric_limits<double>::infinity();
        return e;
    }
    for (const Sample& smp : traj.samples) {
        const double zc = axial_solution(m, mc.epsilon, mc.a_transverse, smp.t, sign, z_ref);
        const double zn = smp.state.point.z;
        e.axial = std::max(e.axial, m == SpaceModel::Hyperbolic ? std::abs(std::asinh(zc) - zn)
                                                                 : std::abs(zc - std::sin(zn)));
        const double ph = azimuth_solution(m, mc.epsilon, mc.a_transverse, o.alpha, smp.t, sign, z_ref);
        e.azimuth = std::max(e.azimuth, std::abs(ph - (smp.state.point.phi - s0.point.phi)));
        e.radius = std::max(e.radius, std::abs(smp.state.point.r - s0.point.r));
    }
    return e;
}

}  // namespace

std::vector<CheckReport> run_closed_form_sweep(SpaceModel m, std::size_t n_cases,
                                               std::uint64_t seed) {
    if (n_cases < 1) throw Error(ErrorKind::InvalidArgument, "need at least one case");
    const bool hyp = m == SpaceModel::Hyperbolic;
    const std::string tag = model_tag(m);
    std::vector<CheckReport> out;

    {  // Axial closed form for generic states crossing z = 0 at t = 0.
        CaseSampler sampler(m, seed);
        Tracker tr("closed-form/axial/" + tag, 1e-6, seed);
        SamplerOptions so;
        so.start_in_plane = true;
        so.require_type_one = true;
        for (std::size_t k = 0; k < n_cases; ++k) {
            const PhysicalCase pc = sampler.next(so);
            const double eps = pc.constants.epsilon, A = pc.constants.a_transverse;
            const int sign = pc.state.vz >= 0 ? 1 : -1;
            const Trajectory traj = integrate(m, pc.B, pc.state, 2.0 * kPi / std::sqrt(eps), tight());
            double err = traj.termination == Termination::Completed ? 0.0 : INFINITY;
            for (const Sample& smp : traj.samples) {
                const double zc = axial_solution(m, eps, A, smp.t, sign, 0.0);
                const double zn = smp.state.point.z;
                err = std::max(err, hyp ? std::abs(std::asinh(zc) - zn) : std::abs(zc - std::sin(zn)));
            }
            tr.add(err, pc.describe());
        }
        tr.add_rejected(sampler.rejected());
        out.push_back(tr.finish());
    }

    {  // Radial closed form, same family of states.
        CaseSampler sampler(m, seed + 1);
        Tracker tr("closed-form/radial/" + tag, 1e-6, seed + 1);
        SamplerOptions so;
        so.start_in_plane = true;
        so.require_type_one = true;
        so.need_surface_forms = true;
        for (std::size_t k = 0; k < n_cases; ++k) {
            const PhysicalCase pc = sampler.next(so);
            const auto& c = pc.constants;
            const double phase = radial_phase(m, pc.B, c.i_phi, c.a_transverse, pc.state.point.r, pc.state.vr);
            const Trajectory traj = integrate(m, pc.B, pc.state, 2.0 * kPi / std::sqrt(c.epsilon), tight());
            double err = traj.termination == Termination::Completed ? 0.0 : INFINITY;
            for (const Sample& smp : traj.samples) {
                const double xc = radial_solution(m, pc.B, c.i_phi, c.a_transverse, c.epsilon, smp.t, phase);
                err = std::max(err, std::abs(xc - radial_x(m, smp.state.point.r)));
            }
            tr.add(err, pc.describe());
        }
        tr.add_rejected(sampler.rejected());
        out.push_back(tr.finish());
    }

    {  // Fixed-radius orbits: axial, azimuth and radius, including the other axial regimes.
        CaseSampler sampler(m, seed + 2);
        Tracker ta("closed-form/fixed-radius-axial/" + tag, 1e-6, seed + 2);
        Tracker tp("closed-form/fixed-radius-azimuth/" + tag, 1e-6, seed + 2);
        Tracker trr("closed-form/fixed-radius-r/" + tag, 1e-8, seed + 2);
        for (std::size_t k = 0; k < n_cases; ++k) {
            double B = sampler.uniform(0.3, 2.0) * (sampler.uniform(-1, 1) < 0 ? -1 : 1);
            double r0 = hyp ? sampler.uniform(0.2, 1.5)
                            : (sampler.uniform(-1, 1) < 0 ? sampler.uniform(0.3, 1.3) : sampler.uniform(1.85, 2.8));
            // Cycle through the axial regimes that the model admits.
            const int regime = hyp ? static_cast<int>(k % 3) : 0;
            CylState s0;
            int sign = 1;
            double z_ref = 0.0;
            std::ostringstream d;
            d.precision(17);
            if (regime == 0) {
                const double vz = sampler.uniform(0.2, 1.5) * (sampler.uniform(-1, 1) < 0 ? -1 : 1);
                s0 = fixed_radius_state(m, B, r0, 0.0, vz);
                sign = vz >= 0 ? 1 : -1;
            } else if (regime == 1) {
                z_ref = sampler.uniform(0.2, 1.0) * (sampler.uniform(-1, 1) < 0 ? -1 : 1);
                s0 = fixed_radius_state(m, B, r0, z_ref, 0.0);
                sign = z_ref >= 0 ? 1 : -1;
                z_ref = 0.0;
            } else {
                z_ref = sampler.uniform(0.2, 1.0) * (sampler.uniform(-1, 1) < 0 ? -1 : 1);
                const double A = fixed_radius_orbit(m, B, r0).a_transverse;
                const int dir = sampler.uniform(-1, 1) < 0 ? -1 : 1;
                s0 = fixed_radius_state(m, B, r0, z_ref, dir * std::sqrt(A) * std::tanh(z_ref));
                sign = dir;
            }
            const MotionConstants mc = invariants_of(m, B, s0);
            const double t_end = regime == 2 ? 2.0 : 2.0 * kPi / std::sqrt(mc.epsilon);
            d << "regime=" << regime << " B=" << B << " r0=" << r0 << " z0=" << s0.point.z << " vz=" << s0.vz;
            const ClosedFormErrors e = compare_fixed_radius(m, B, s0, t_end, sign, z_ref);
            ta.add(e.axial, d.str());
            tp.add(e.azimuth, d.str());
            trr.add(e.radius, d.str());
        }
        out.push_back(ta.finish());
        out.push_back(tp.finish());
        out.push_back(trr.finish());
    }

    if (!hyp) {  // Axial period of the spherical motion.
        CaseSampler sampler(m, seed + 3);
        Tracker tr("closed-form/period/" + tag, 1e-9, seed + 3);
        for (std::size_t k = 0; k < n_cases; ++k) {
            const double B = sampler.uniform(0.3, 2.0);
            const double r0 = sampler.uniform(0.3, 1.3);
            const CylState s0 = fixed_radius_state(m, B, r0, 0.0, sampler.uniform(0.3, 1.5));
            const double eps = invariants_of(m, B, s0).epsilon;
            const double T = kPi / std::sqrt(eps);
            const PeriodMeasurement pm = measure_axial_period(m, B, s0, 6.5 * T, T);
            std::ostringstream d;
            d.precision(17);
            d << "B=" << B << " r0=" << r0 << " vz=" << s0.vz;
            tr.add(pm.crossing_times.size() >= 6 ? pm.worst_deviation : INFINITY, d.str());
        }
        out.push_back(tr.finish());
    }
    return out;
}

std::vector<CheckReport> run_surface_sweep(SpaceModel m, std::size_t n_cases, std::uint64_t seed) {
    if (n_cases < 1) throw Error(ErrorKind::InvalidArgument, "need at least one case");
    const std::string tag = model_tag(m);
    CaseSampler sampler(m, seed);
    Tracker t_rphi("surface/r-phi/" + tag, 1e-6, seed);
    Tracker t_rz("surface/r-z/" + tag, 1e-6, seed);
    Tracker t_turn("surface/turning-points/" + tag, 1e-8, seed);
    SamplerOptions so;
    so.need_surface_forms = true;
    for (std::size_t k = 0; k < n_cases; ++k) {
        const PhysicalCase pc = sampler.next(so);
        const auto& c = pc.constants;
        const double offset = rphi_offset(m, pc.B, pc.state);
        const RzAnchor an = rz_anchor(m, pc.B, pc.state);
        const Trajectory traj = integrate(m, pc.B, pc.state, 20.0, tight());
        const RadialQuadratic q = radial_quadratic(m, pc.B, c.i_phi, c.a_transverse);
        const bool finite = pc.cls.radial != RadialClass::InfiniteOneTurning;
        double e_rphi = traj.termination == Termination::Completed ? 0.0 : INFINITY;
        double e_rz = e_rphi, e_turn = 0.0;
        AxialBranch br = an.branch;
        double last_vz = pc.state.vz;
        for (const Sample& smp : traj.samples) {
            const CylState& s = smp.state;
            if (s.vz * last_vz < 0) ++br.sheet;
            if (s.vz != 0) last_vz = s.vz;
            e_rphi = std::max(e_rphi, std::abs(trajectory_surface_rphi(m, pc.B, c.i_phi, c.a_transverse,
                                                                       s.point, offset)));
            // Local integrals keep the axial arcsin/arccosh inside its domain near turning points.
            const MotionConstants lc = invariants_of(m, pc.B, s);
            e_rz = std::max(e_rz, std::abs(trajectory_surface_rz(m, pc.B, lc.i_phi, lc.a_transverse,
                                                                 lc.epsilon, s.point, br, an.phase)));
            const double x = radial_x(m, s.point.r);
            const auto [x1, x2] = *q.roots;
            if (finite) e_turn = std::max({e_turn, x1 - x, x - x2});
            else e_turn = std::max(e_turn, x2 - x);
        }
        t_rphi.add(e_rphi, pc.describe());
        t_rz.add(e_rz, pc.describe());
        t_turn.add(e_turn, pc.describe());
    }
    t_rphi.add_rejected(sampler.rejected());
    return {t_rphi.finish(), t_rz.finish(), t_turn.finish()};
}

double fd_shift_determinant(SpaceModel m, const TransversalShift& s, const CylPoint& p_shifted,
                            double h) {
    const TransversalShift back = s.inverse();
    auto map = [&](double r, double phi) { return shift_pullback_cyl(m, back, {r, phi, p_shifted.z}); };
    const CylPoint rp = map(p_shifted.r + h, p_shifted.phi), rm = map(p_shifted.r - h, p_shifted.phi);
    const CylPoint pp = map(p_shifted.r, p_shifted.phi + h), pm = map(p_shifted.r, p_shifted.phi - h);
    const double dr_dr = (rp.r - rm.r) / (2 * h), dphi_dr = wrap_pi(rp.phi - rm.phi) / (2 * h);
    const double dr_dphi = (pp.r - pm.r) / (2 * h), dphi_dphi = wrap_pi(pp.phi - pm.phi) / (2 * h);
    return dr_dr * dphi_dphi - dr_dphi * dphi_dr;
}

std::vector<CheckReport> run_symmetry_sweep(SpaceModel m, std::size_t n_cases, std::uint64_t seed) {
    if (n_cases < 1) throw Error(ErrorKind::InvalidArgument, "need at least one case");
    const bool hyp = m == SpaceModel::Hyperbolic;
    const std::string tag = model_tag(m);
    CaseSampler rng(m, seed);
    Tracker t_field("symmetry/field-invariance/" + tag, 1e-9, seed);
    Tracker t_jac("symmetry/jacobian-fd/" + tag, 1e-6, seed);
    Tracker t_params("symmetry/parameter-invariant/" + tag, 1e-12, seed);
    Tracker t_compose("symmetry/parameter-composition/" + tag, 1e-10, seed);
    Tracker t_surface("symmetry/shifted-surface/" + tag, 1e-9, seed);
    Tracker t_gauge_fd("symmetry/gauge-fd/" + tag, 1e-6, seed);
    Tracker t_gauge_rel("symmetry/gauge-relation/" + tag, 1e-8, seed);
    Tracker t_plane03("symmetry/plane03-noninvariance/" + tag, 1e-6, seed, Bound::Lower);

    auto random_shift = [&](bool allow_plane02) {
        TransversalShift s;
        s.plane = allow_plane02 && rng.uniform(0, 1) < 0.5 ? ShiftPlane::Plane02 : ShiftPlane::Plane01;
        const double mag = hyp ? rng.uniform(0.05, 1.5) : rng.uniform(0.05, 2.5);
        s.amount = rng.uniform(-1, 1) < 0 ? -mag : mag;
        return s;
    };
    auto random_point = [&]() {
        return CylPoint{hyp ? rng.uniform(0.1, 2.0) : rng.uniform(0.1, kPi - 0.1), rng.uniform(0.0, kTwoPi),
                        hyp ? rng.uniform(-1.0, 1.0) : rng.uniform(-1.2, 1.2)};
    };
    auto describe = [](const TransversalShift& s, const CylPoint& p, double B) {
        std::ostringstream os;
        os.precision(17);
        os << "plane=" << static_cast<int>(s.plane) + 1 << " amount=" << s.amount << " r=" << p.r
           << " phi=" << p.phi << " z=" << p.z << " B=" << B;
        return os.str();
    };

    for (std::size_t k = 0; k < n_cases; ++k) {
        const double B = rng.uniform(-2.0, 2.0);
        {  // Field invariance and the Jacobian identity.
            const TransversalShift s = random_shift(true);
            const CylPoint p = random_point();
            const CylPoint q = shift_pullback_cyl(m, s, p);
            if (q.r < 0.05 || (!hyp && q.r > kPi - 0.05)) {
                t_field.add_rejected(1);
            } else {
                const double f_ref = std::abs(field_strength(m, B, q.r));
                t_field.add(verify_field_invariance(m, s, B, p) / std::max(f_ref, 1e-300), describe(s, p, B));
                const double j = shift_jacobian(m, s, q, p);
                t_jac.add(std::abs(j - fd_shift_determinant(m, s, q)) / std::max(1.0, std::abs(j)),
                          describe(s, p, B));
            }
        }
        {  // Gauge function: finite differences and the potential relation.
            const TransversalShift s = random_shift(true);
            CylPoint q = random_point();
            const double phi01 = s.plane == ShiftPlane::Plane02 ? q.phi - kPi / 2 : q.phi;
            const CylPoint pre = shift_pullback_cyl(m, s.inverse(), q);
            if (std::abs(std::sin(phi01)) < 0.1 || pre.r < 0.05 || (!hyp && pre.r > kPi - 0.2)) {
                t_gauge_fd.add_rejected(1);
            } else {
                const double h = 1e-5;
                const GaugeEvaluation g = gauge_function(m, s, B, q);
                auto lam = [&](double r, double phi) { return gauge_function(m, s, B, {r, phi, q.z}).lambda_value; };
                const double fd_r = (lam(q.r + h, q.phi) - lam(q.r - h, q.phi)) / (2 * h);
                const double fd_p = (lam(q.r, q.phi + h) - lam(q.r, q.phi - h)) / (2 * h);
                const double scale = std::max(1.0, std::abs(B));
                t_gauge_fd.add(std::max(std::abs(fd_r - g.dLambda_dr), std::abs(fd_p - g.dLambda_dphi)) / scale,
                               describe(s, q, B));
                const PulledBackPotential a = pullback_potential(m, s, B, q);
                const double rel_phi = std::abs(a.a_phi - (potential_phi(m, B, q.r) + g.dLambda_dphi));
                const double rel_r = std::abs(a.a_r - g.dLambda_dr);
                t_gauge_rel.add(std::max(rel_phi, rel_r) / scale, describe(s, q, B));
            }
        }
        {  // Plane03: the pulled-back field acquires an F_{phi z} component.
            TransversalShift s = random_shift(false);
            s.plane = ShiftPlane::Plane03;
            const double Bn = (rng.uniform(-1, 1) < 0 ? -1 : 1) * rng.uniform(0.5, 2.0);
            const CylPoint q{hyp ? rng.uniform(0.2, 1.5) : rng.uniform(0.2, kPi - 0.2), rng.uniform(0.0, kTwoPi),
                             rng.uniform(-0.5, 0.5)};
            t_plane03.add(std::abs(pullback_field(m, s, Bn, q).f_phi_z), describe(s, q, Bn));
        }
        {  // Action on (J, C): invariant, composition and the shifted trajectory surface.
            const double I = rng.uniform(-2.0, 2.0), A = rng.uniform(0.0, 4.0);
            CanonicalParams cp;
            try {
                cp = canonical_parameters(m, B, I, A);
            } catch (const Error&) {
                t_params.add_rejected(1);
                continue;
            }
            const TransversalShift s1 = random_shift(false), s2 = random_shift(false);
            const CanonicalParams c1 = transform_parameters(m, s1, cp);
            std::ostringstream d;
            d.precision(17);
            d << "B=" << B << " I=" << I << " A=" << A << " amount1=" << s1.amount << " amount2=" << s2.amount;
            t_params.add(std::abs(c1.invariant_value - cp.invariant_value), d.str());
            const CanonicalParams c12 = transform_parameters(m, s2, c1);
            const CanonicalParams csum = transform_parameters(m, {ShiftPlane::Plane01, s1.amount + s2.amount}, cp);
            t_compose.add(std::max(std::abs(c12.j - csum.j), std::abs(c12.c_par - csum.c_par)), d.str());

            // A point on J x -+ C (transverse term) = B, moved by the shift, lies on the new surface.
            const double r = hyp ? rng.uniform(0.1, 2.0) : rng.uniform(0.1, kPi - 0.1);
            const double sr = hyp ? std::sinh(r) : std::sin(r), xr = radial_x(m, r);
            const double cphi = cp.c_par > 1e-3 ? (hyp ? (cp.j * xr - B) : (B - cp.j * xr)) / (cp.c_par * sr) : 2.0;
            if (std::abs(cphi) < 1.0) {
                const CylPoint p{r, std::acos(cphi), rng.uniform(-0.5, 0.5)};
                const CylPoint q = shift_pullback_cyl(m, s1, p);
                const double res = hyp ? c1.j * std::cosh(q.r) - c1.c_par * std::sinh(q.r) * std::cos(q.phi) - B
                                       : c1.j * std::cos(q.r) + c1.c_par * std::sin(q.r) * std::cos(q.phi) - B;
                t_surface.add(std::abs(res) / std::max(1.0, std::abs(c1.j) + std::abs(c1.c_par)), d.str());
            }
        }
    }
    return {t_field.finish(), t_jac.finish(), t_params.finish(), t_compose.finish(), t_surface.finish(),
            t_gauge_fd.finish(), t_gauge_rel.finish(), t_plane03.finish()};
}

double convergence_error(ConvergenceCase c, double h) {
    const bool hyp = c == ConvergenceCase::FixedRadiusHyperbolic;
    const SpaceModel m = hyp ? SpaceModel::Hyperbolic : SpaceModel::Spherical;
    const double B = 2.0;
    const double r0 = hyp ? std::acosh(2.0) : kPi / 3;
    const double vz = hyp ? 1.0 : 2.0;
    const double t_end = hyp ? 2.0 : kPi / 4;
    const FixedRadiusOrbit o = fixed_radius_orbit(m, B, r0);
    CylState s0;
    s0.point = {r0, 0.0, 0.0};
    s0.vphi = o.alpha;
    s0.vz = vz;
    const MotionConstants mc = invariants_of(m, B, s0);
    const Trajectory tr = integrate(m, B, s0, t_end, StepControl::fixed(h));
    if (tr.termination != Termination::Completed) return INFINITY;
    const CylState& s = tr.samples.back().state;
    const double zc = axial_solution(m, mc.epsilon, mc.a_transverse, t_end, 1, 0.0);
    const double pc = azimuth_solution(m, mc.epsilon, mc.a_transverse, o.alpha, t_end, 1, 0.0);
    const double ez = hyp ? std::abs(std::asinh(zc) - s.point.z) : std::abs(zc - std::sin(s.point.z));
    return ez + std::abs(pc - s.point.phi) + std::abs(s.point.r - r0);
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

double measure_convergence_order(ConvergenceCase c, const std::vector<double>& steps) {
    if (steps.size() < 3) throw Error(ErrorKind::InsufficientData, "need at least three step sizes");
    std::vector<double> lx, ly;
    for (double h : steps) {
        lx.push_back(std::log(h));
        ly.push_back(std::log(convergence_error(c, h)));
    }
    return fitted_slope(lx, ly);
}

double flat_limit_error(SpaceModel m, double scale) {
    const double B = 1.0, rho0 = 1.0, w = 0.5;
    CylState s0;
    s0.point = {scale * rho0, 0.0, 0.0};
    s0.vphi = -B;
    s0.vz = scale * w;
    const Trajectory tr = integrate(m, B, s0, 2.0 * kPi / B, tight());
    if (tr.termination != Termination::Completed) return INFINITY;
    double err = 0;
    for (const Sample& smp : tr.samples) {
        const double x = smp.state.point.r / scale, ph = smp.state.point.phi;
        const double phe = -B * smp.t;
        const double dx = x * std::cos(ph) - rho0 * std::cos(phe);
        const double dy = x * std::sin(ph) - rho0 * std::sin(phe);
        const double dz = smp.state.point.z / scale - w * smp.t;
        err = std::max(err, std::sqrt(dx * dx + dy * dy + dz * dz));
    }
    return err;
}

double christoffel_flat_limit_error(SpaceModel m, const CylPoint& p, double scale) {
    const ChristoffelTable flat = christoffel(SpaceModel::Euclidean, p);
    const ChristoffelTable curved = christoffel(m, {scale * p.r, p.phi, scale * p.z});
    const double lam[3] = {scale, 1.0, scale};
    double err = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                const double g = curved.gamma[a][b][c] * lam[b] * lam[c] / lam[a];
                err = std::max(err, std::abs(g - flat.gamma[a][b][c]));
            }
    return err;
}

PeriodMeasurement measure_axial_period(SpaceModel m, double B, const CylState& s0, double t_end,
                                       double expected, double rel_tol) {
    auto f = [&](double, const PhaseVector& v) { return phase_rhs(m, B, v); };
    PeriodMeasurement pm;
    PhaseVector y = to_phase(m, s0);
    PhaseVector k1 = f(0.0, y);
    double t = 0, h = 1e-3;
    const double atol = rel_tol * 1e-2;
    bool rejected = false;
    while (t < t_end) {
        const double h_try = std::min(h, t_end - t);
        const auto st = ode::dopri5_step<6>(f, t, y, k1, h_try);
        const double err = ode::error_norm(st, rel_tol, atol);
        if (!(err <= 1.0)) {
            h = h_try * ode::step_factor(std::isfinite(err) ? err : 1e10, true);
            rejected = true;
            if (h < 1e-14) throw Error(ErrorKind::InvalidArgument, "period measurement step underflow");
            continue;
        }
        if (y[2] != 0 && y[2] * st.y1[2] <= 0) {
            // Newton on z(t + d) = 0 with fresh substeps from the start of the step.
            double d = h_try * y[2] / (y[2] - st.y1[2]);
            for (int it = 0; it < 8; ++it) {
                const auto sub = ode::dopri5_step<6>(f, t, y, k1, d);
                const double dd = sub.y1[2] / sub.y1[5];
                d -= dd;
                if (std::abs(dd) < 1e-15) break;
            }
            pm.crossing_times.push_back(t + d);
        }
        t += h_try;
        y = st.y1;
        k1 = st.k7;
        h = std::min(0.05, h_try * ode::step_factor(err, rejected));
        rejected = false;
    }
    for (std::size_t i = 1; i < pm.crossing_times.size(); ++i)
        pm.worst_deviation = std::max(pm.worst_deviation,
                                      std::abs(pm.crossing_times[i] - pm.crossing_times[i - 1] - expected));
    return pm;
}

}  // namespace curvedmag::verify
