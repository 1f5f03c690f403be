#include "curvedmag/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvedmag/field.hpp"
#include "curvedmag/ode.hpp"

namespace curvedmag {

namespace {

// Transverse metric factors: g_rr = cz2, g_phiphi = cz2 * sr^2.
struct Factors {
    double cz2;
    double sr;
};

Factors factors(SpaceModel m, double r, double z) {
    switch (m) {
        case SpaceModel::Hyperbolic: {
            const double c = std::cosh(z);
            return {c * c, std::sinh(r)};
        }
        case SpaceModel::Spherical: {
            const double c = std::cos(z);
            return {c * c, std::sin(r)};
        }
        case SpaceModel::Euclidean: return {1.0, r};
    }
    return {1.0, r};
}

double rms_scaled(const PhaseVector& v, const PhaseVector& sc) {
    double acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += (v[i] / sc[i]) * (v[i] / sc[i]);
    return std::sqrt(acc / v.size());
}

double initial_step(SpaceModel m, double B, const PhaseVector& y0, const PhaseVector& f0,
                    const StepControl& ctl) {
    PhaseVector sc;
    for (std::size_t i = 0; i < sc.size(); ++i) sc[i] = ctl.abs_tol + ctl.rel_tol * std::abs(y0[i]);
    const double d0 = rms_scaled(y0, sc), d1 = rms_scaled(f0, sc);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, ctl.h_max);
    const PhaseVector f1 = phase_rhs(m, B, ode::axpy(y0, h0, f0));
    PhaseVector df;
    for (std::size_t i = 0; i < df.size(); ++i) df[i] = f1[i] - f0[i];
    const double d2 = rms_scaled(df, sc) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::max(ctl.h_min, std::min({100.0 * h0, h1, ctl.h_max}));
}

bool finite_phase(const PhaseVector& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

// Empty string when the state is acceptable.
std::string guard_violation(SpaceModel m, const PhaseVector& y, const IntegrateOptions& opt) {
    if (!finite_phase(y)) return "non-finite state";
    if (y[0] <= opt.axis_guard) return "approached the axis r = 0";
    if (m == SpaceModel::Spherical) {
        if (y[0] >= std::numbers::pi - opt.axis_guard) return "approached the antipodal axis r = pi";
        if (std::abs(y[2]) >= std::numbers::pi / 2 - opt.pole_guard) return "approached the pole |z| = pi/2";
    }
    return {};
}

void update_drift(Drift& d, const MotionConstants& c0, const MotionConstants& c) {
    d.epsilon = std::max(d.epsilon, std::abs(c.epsilon - c0.epsilon));
    d.i_phi = std::max(d.i_phi, std::abs(c.i_phi - c0.i_phi));
    d.a_transverse = std::max(d.a_transverse, std::abs(c.a_transverse - c0.a_transverse));
}

}  // namespace

StepControl StepControl::fixed(double h) {
    StepControl c;
    c.mode = Mode::Fixed;
    c.h = h;
    return c;
}

StepControl StepControl::adaptive(double rel_tol, double abs_tol, double h_min, double h_max) {
    StepControl c;
    c.mode = Mode::Adaptive;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.h_min = h_min;
    c.h_max = h_max;
    return c;
}

void StepControl::validate() const {
    if (mode == Mode::Fixed) {
        if (!(h > 0) || !std::isfinite(h)) throw Error(ErrorKind::InvalidArgument, "fixed step h must be > 0");
        return;
    }
    if (!(rel_tol > 0) || !(abs_tol > 0))
        throw Error(ErrorKind::InvalidArgument, "tolerances must be > 0");
    if (!(h_min > 0) || !(h_min <= h_max) || !std::isfinite(h_max))
        throw Error(ErrorKind::InvalidArgument, "need 0 < h_min <= h_max");
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "Completed";
        case Termination::SingularityAbort: return "SingularityAbort";
        case Termination::StepUnderflow: return "StepUnderflow";
    }
    return "?";
}

double Drift::max() const { return std::max({epsilon, i_phi, a_transverse}); }

Acceleration eom_rhs(SpaceModel m, double B, const CylState& s) {
    check_chart(m, s.point);
    const double r = s.point.r, z = s.point.z;
    const double vr = s.vr, vp = s.vphi, vz = s.vz;
    const bool moving = vr != 0 || vp != 0;
    if (r <= kRMin && moving)
        throw Error(ErrorKind::AxisSingularity, "azimuthal equation diverges on the axis");
    if (m == SpaceModel::Spherical && r >= std::numbers::pi - kRMin && moving)
        throw Error(ErrorKind::AxisSingularity, "azimuthal equation diverges at r = pi");
    Acceleration a;
    switch (m) {
        case SpaceModel::Hyperbolic: {
            const double shr = std::sinh(r), chr = std::cosh(r);
            const double shz = std::sinh(z), chz = std::cosh(z), thz = std::tanh(z);
            const double chz2 = chz * chz;
            a.ar = -2.0 * thz * vr * vz + shr * chr * vp * vp + B * shr / chz2 * vp;
            a.aphi = moving ? -2.0 * chr / shr * vp * vr - 2.0 * thz * vp * vz - B * vr / (chz2 * shr) : 0.0;
            a.az = shz * chz * (vr * vr + shr * shr * vp * vp);
            break;
        }
        case SpaceModel::Spherical: {
            const double sr = std::sin(r), cr = std::cos(r);
            const double sz = std::sin(z), cz = std::cos(z), tz = std::tan(z);
            const double cz2 = cz * cz;
            a.ar = 2.0 * tz * vr * vz + sr * cr * vp * vp + B * sr / cz2 * vp;
            a.aphi = moving ? -2.0 * cr / sr * vp * vr + 2.0 * tz * vp * vz - B * vr / (cz2 * sr) : 0.0;
            a.az = -sz * cz * (vr * vr + sr * sr * vp * vp);
            break;
        }
        case SpaceModel::Euclidean:
            a.ar = r * vp * vp + B * r * vp;
            a.aphi = moving ? -2.0 / r * vr * vp - B * vr / r : 0.0;
            a.az = 0.0;
            break;
    }
    return a;
}

MotionConstants invariants_of(SpaceModel m, double B, const CylState& s) {
    check_chart(m, s.point);
    return phase_invariants(m, B, to_phase(m, s));
}

PhaseVector to_phase(SpaceModel m, const CylState& s) {
    const Factors f = factors(m, s.point.r, s.point.z);
    return {s.point.r, s.point.phi, s.point.z, f.cz2 * s.vr, f.cz2 * f.sr * f.sr * s.vphi, s.vz};
}

CylState from_phase(SpaceModel m, const PhaseVector& y) {
    const Factors f = factors(m, y[0], y[2]);
    CylState s;
    s.point = {y[0], y[1], y[2]};
    s.vr = y[3] / f.cz2;
    s.vphi = y[4] / (f.cz2 * f.sr * f.sr);
    s.vz = y[5];
    return s;
}

PhaseVector phase_rhs(SpaceModel m, double B, const PhaseVector& y) {
    const double r = y[0], z = y[2], pr = y[3], pp = y[4], pz = y[5];
    double cz2, sr, cr, zforce;
    switch (m) {
        case SpaceModel::Hyperbolic: {
            const double c = std::cosh(z);
            cz2 = c * c;
            sr = std::sinh(r);
            cr = std::cosh(r);
            zforce = std::tanh(z) / cz2;
            break;
        }
        case SpaceModel::Spherical: {
            const double c = std::cos(z);
            cz2 = c * c;
            sr = std::sin(r);
            cr = std::cos(r);
            zforce = -std::tan(z) / cz2;
            break;
        }
        default:
            cz2 = 1.0;
            sr = r;
            cr = 1.0;
            zforce = 0.0;
            break;
    }
    const double q = pp / sr;  // p_phi / S
    PhaseVector d;
    d[0] = pr / cz2;
    d[1] = q / (sr * cz2);
    d[2] = pz;
    d[3] = (cr * q * q / sr + B * q) / cz2;
    d[4] = -B * sr * pr / cz2;
    d[5] = zforce * (pr * pr + q * q);
    return d;
}

MotionConstants phase_invariants(SpaceModel m, double B, const PhaseVector& y) {
    const Factors f = factors(m, y[0], y[2]);
    const double q = y[4] / f.sr;
    MotionConstants c;
    c.a_transverse = y[3] * y[3] + q * q;
    c.epsilon = c.a_transverse / f.cz2 + y[5] * y[5];
    c.i_phi = y[4] - potential_phi(m, B, y[0]);
    return c;
}

double quadrature_phi_rate(SpaceModel m, double B, double I, const CylPoint& p) {
    const Factors f = factors(m, p.r, p.z);
    return (I + potential_phi(m, B, p.r)) / (f.cz2 * f.sr * f.sr);
}

double quadrature_vz_squared(SpaceModel m, double epsilon, double A, const CylPoint& p) {
    const Factors f = factors(m, p.r, p.z);
    return epsilon - A / f.cz2;
}

Trajectory integrate(SpaceModel m, double B, const CylState& s0, double t_end,
                     const StepControl& ctl, const IntegrateOptions& opt) {
    ctl.validate();
    if (!(t_end > 0) || !std::isfinite(t_end)) throw Error(ErrorKind::InvalidArgument, "t_end must be > 0");
    if (opt.stride == 0) throw Error(ErrorKind::InvalidArgument, "stride must be >= 1");
    check_chart(m, s0.point);
    PhaseVector y = to_phase(m, s0);
    if (const std::string bad = guard_violation(m, y, opt); !bad.empty())
        throw Error(ErrorKind::AxisSingularity, "initial state: " + bad);

    Trajectory tr;
    tr.initial = invariants_of(m, B, s0);
    tr.samples.push_back({0.0, s0});
    auto f = [&](double, const PhaseVector& v) { return phase_rhs(m, B, v); };

    double t = 0;
    std::size_t since_sample = 0;
    auto accept = [&](double t_new, const PhaseVector& y_new) -> bool {
        if (const std::string bad = guard_violation(m, y_new, opt); !bad.empty()) {
            tr.termination = Termination::SingularityAbort;
            tr.reason = bad + " at t = " + std::to_string(t_new);
            if (since_sample != 0) tr.samples.push_back({t, from_phase(m, y)});
            return false;
        }
        t = t_new;
        y = y_new;
        ++tr.accepted_steps;
        update_drift(tr.drift, tr.initial, phase_invariants(m, B, y));
        if (++since_sample == opt.stride || t >= t_end) {
            tr.samples.push_back({t, from_phase(m, y)});
            since_sample = 0;
        }
        return true;
    };

    if (ctl.mode == StepControl::Mode::Fixed) {
        const auto n = static_cast<std::size_t>(std::ceil(t_end / ctl.h - 1e-9));
        for (std::size_t i = 1; i <= n; ++i) {
            const double t_next = i == n ? t_end : static_cast<double>(i) * ctl.h;
            if (!accept(t_next, ode::rk4_step<6>(f, t, y, t_next - t))) break;
        }
        return tr;
    }

    PhaseVector k1 = f(t, y);
    double h = initial_step(m, B, y, k1, ctl);
    bool rejected = false;
    while (t < t_end) {
        const bool last = t + h >= t_end * (1 - 1e-15);
        const double h_try = last ? t_end - t : h;
        const auto st = ode::dopri5_step<6>(f, t, y, k1, h_try);
        double err = ode::error_norm(st, ctl.rel_tol, ctl.abs_tol);
        if (!std::isfinite(err)) err = 1e10;
        if (err <= 1.0) {
            if (!accept(last ? t_end : t + h_try, st.y1)) break;
            k1 = st.k7;
            h = std::min(ctl.h_max, h_try * ode::step_factor(err, rejected));
            rejected = false;
        } else {
            ++tr.rejected_steps;
            h = h_try * ode::step_factor(err, true);
            rejected = true;
            if (h < ctl.h_min) {
                tr.termination = Termination::StepUnderflow;
                tr.reason = "step size fell below h_min at t = " + std::to_string(t);
                if (since_sample != 0) tr.samples.push_back({t, from_phase(m, y)});
                break;
            }
        }
    }
    return tr;
}

double effective_relativistic_B(double B, double lambda) {
    if (!(lambda > 0 && lambda < 1)) throw Error(ErrorKind::InvalidLambda, "lambda must lie in (0, 1)");
    return lambda * B;
}

void require_subluminal(SpaceModel m, double B, const CylState& s) {
    if (!(invariants_of(m, B, s).epsilon < 1.0))
        throw Error(ErrorKind::InvalidArgument, "relativistic run needs epsilon < 1");
}

CylState state_from_integrals(SpaceModel m, double B, double I, double A, double epsilon,
                              double r0, double z0, double phi0, int sign_vr, int sign_vz) {
    const CylPoint p{r0, phi0, z0};
    check_chart(m, p);
    if (r0 <= kRMin) throw Error(ErrorKind::AxisSingularity, "r0 must be off the axis");
    const Factors f = factors(m, r0, z0);
    const double p_phi = I + potential_phi(m, B, r0);
    const double q = p_phi / f.sr;
    double pr2 = A - q * q;
    double vz2 = epsilon - A / f.cz2;
    const double tol = 1e-12 * std::max({1.0, A, epsilon});
    if (pr2 < -tol) throw Error(ErrorKind::InvalidParams, "r0 lies outside the radially allowed region");
    if (vz2 < -tol) throw Error(ErrorKind::InvalidParams, "z0 lies outside the axially allowed region");
    pr2 = std::max(pr2, 0.0);
    vz2 = std::max(vz2, 0.0);
    CylState s;
    s.point = p;
    s.vr = (sign_vr < 0 ? -1.0 : 1.0) * std::sqrt(pr2) / f.cz2;
    s.vphi = p_phi / (f.cz2 * f.sr * f.sr);
    s.vz = (sign_vz < 0 ? -1.0 : 1.0) * std::sqrt(vz2);
    return s;
}

}  // namespace curvedmag
