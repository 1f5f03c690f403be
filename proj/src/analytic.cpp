#include "curvedmag/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvedmag/field.hpp"

namespace curvedmag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDiscTol = 1e-12;
constexpr double kDomainTol = 1e-9;

void require_curved(SpaceModel m, const char* op) {
    if (m == SpaceModel::Euclidean)
        throw Error(ErrorKind::Unsupported, std::string(op) + " is defined for H3 and S3 only");
}

bool nearly_equal(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

int sgn(int s) { return s < 0 ? -1 : 1; }

double clamp_unit(double v, const char* what) {
    if (std::abs(v) > 1.0 + kDomainTol)
        throw Error(ErrorKind::DomainError, std::string(what) + " argument outside [-1, 1]");
    return std::clamp(v, -1.0, 1.0);
}

double radial_x(SpaceModel m, double r) {
    return m == SpaceModel::Hyperbolic ? std::cosh(r) : std::cos(r);
}

// Normalized radial variable of the unfolded solution and its growth rate per
// unit transverse time. Finite motion: y = sin(phase), infinite: y = cosh(phase).
struct RadialForm {
    bool finite;
    double rate;
    double sgn_y;  // y = sgn_y (2 a x + b) / sqrt(disc)
};

RadialForm radial_form(SpaceModel m, const RadialQuadratic& q) {
    if (m == SpaceModel::Hyperbolic && q.a > 0) return {false, std::sqrt(q.a), 1.0};
    if (q.a < 0) return {true, std::sqrt(-q.a), m == SpaceModel::Hyperbolic ? -1.0 : 1.0};
    throw Error(ErrorKind::RegimeMismatch, "radial quadratic with a = 0 has no sine/cosh form");
}

double radial_y(const RadialForm& f, const RadialQuadratic& q, double x) {
    return f.sgn_y * (2.0 * q.a * x + q.b) / std::sqrt(q.disc);
}

double x_from_y(const RadialForm& f, const RadialQuadratic& q, double y) {
    return (f.sgn_y * y * std::sqrt(q.disc) - q.b) / (2.0 * q.a);
}

}  // namespace

std::string_view to_string(RadialClass c) {
    switch (c) {
        case RadialClass::FixedRadius: return "FixedRadius";
        case RadialClass::FiniteTwoTurning: return "FiniteTwoTurning";
        case RadialClass::InfiniteCritical: return "InfiniteCritical";
        case RadialClass::InfiniteOneTurning: return "InfiniteOneTurning";
        case RadialClass::SphericalFinite: return "SphericalFinite";
        case RadialClass::NonPhysical: return "NonPhysical";
    }
    return "?";
}

std::string_view to_string(AxialClass c) {
    switch (c) {
        case AxialClass::TypeI: return "TypeI";
        case AxialClass::TypeII: return "TypeII";
        case AxialClass::CriticalPlane: return "CriticalPlane";
        case AxialClass::CriticalExp: return "CriticalExp";
        case AxialClass::NonPhysical: return "NonPhysical";
    }
    return "?";
}

RadialQuadratic radial_quadratic(SpaceModel m, double B, double I, double A) {
    require_curved(m, "radial_quadratic");
    if (!(A >= 0)) throw Error(ErrorKind::InvalidParams, "A must be >= 0");
    RadialQuadratic q;
    if (m == SpaceModel::Hyperbolic) {
        q.a = A - B * B;
        q.b = 2.0 * B * (I + B);
        q.c = -A - (I + B) * (I + B);
    } else {
        q.a = -A - B * B;
        q.b = -2.0 * B * (I - B);
        q.c = A - (I - B) * (I - B);
    }
    q.disc = q.b * q.b - 4.0 * q.a * q.c;
    const double scale = std::max(q.b * q.b, std::abs(4.0 * q.a * q.c));
    q.double_root = std::abs(q.disc) <= kDiscTol * scale;
    if (q.a == 0) {
        if (q.b != 0) q.roots = std::make_pair(-q.c / q.b, -q.c / q.b);
        return q;
    }
    if (q.double_root) {
        const double x0 = -q.b / (2.0 * q.a);
        q.roots = std::make_pair(x0, x0);
    } else if (q.disc > 0) {
        const double s = std::sqrt(q.disc);
        const double w = -0.5 * (q.b + std::copysign(s, q.b));
        const double x1 = w / q.a, x2 = q.c / w;
        q.roots = std::make_pair(std::min(x1, x2), std::max(x1, x2));
    }
    return q;
}

TrajectoryClass classify(SpaceModel m, double B, double I, double A, double epsilon,
                         std::optional<double> z0) {
    require_curved(m, "classify");
    if (!(epsilon >= 0)) throw Error(ErrorKind::InvalidParams, "epsilon must be >= 0");
    const RadialQuadratic q = radial_quadratic(m, B, I, A);
    const bool hyp = m == SpaceModel::Hyperbolic;
    auto admissible = [&](double x) { return hyp ? x >= 1.0 - 1e-12 : std::abs(x) <= 1.0 + 1e-12; };

    TrajectoryClass tc;
    if (A == 0) {
        // No transverse motion: the particle keeps its radius.
        const bool ok = B == 0 ? I == 0 : admissible(hyp ? (I + B) / B : (B - I) / B);
        tc.radial = ok ? RadialClass::FixedRadius : RadialClass::NonPhysical;
    } else if (hyp) {
        const double a_scale = std::max(A, B * B);
        if (std::abs(q.a) <= 1e-12 * a_scale) {
            tc.radial = q.b > 0 ? RadialClass::InfiniteCritical : RadialClass::NonPhysical;
        } else if (q.a > 0) {
            tc.radial = RadialClass::InfiniteOneTurning;
        } else if (q.double_root) {
            tc.radial = q.roots->first > 1.0 ? RadialClass::FixedRadius : RadialClass::NonPhysical;
        } else if (q.disc < 0) {
            tc.radial = RadialClass::NonPhysical;
        } else {
            const bool finite = I != 0 ? B * I + A > 0 : true;
            tc.radial = finite ? RadialClass::FiniteTwoTurning : RadialClass::NonPhysical;
        }
    } else {
        const double apb = A + B * B;
        if (q.double_root) {
            tc.radial = std::abs(q.roots->first) < 1.0 ? RadialClass::FixedRadius : RadialClass::NonPhysical;
        } else if (apb > (I - B) * (I - B) && std::abs(B * (I - B)) <= apb) {
            tc.radial = RadialClass::SphericalFinite;
        } else {
            tc.radial = RadialClass::NonPhysical;
        }
    }

    if (nearly_equal(epsilon, A)) {
        const bool off_plane = z0.has_value() && *z0 != 0;
        if (!hyp && off_plane) tc.axial = AxialClass::NonPhysical;
        else tc.axial = off_plane ? AxialClass::CriticalExp : AxialClass::CriticalPlane;
    } else if (epsilon > A) {
        tc.axial = AxialClass::TypeI;
    } else {
        tc.axial = hyp ? AxialClass::TypeII : AxialClass::NonPhysical;
    }
    return tc;
}

FixedRadiusOrbit fixed_radius_orbit(SpaceModel m, double B, double r0) {
    require_curved(m, "fixed_radius_orbit");
    if (!(r0 > 0) || !std::isfinite(r0)) throw Error(ErrorKind::InvalidRadius, "r0 must be > 0");
    FixedRadiusOrbit o;
    if (m == SpaceModel::Hyperbolic) {
        if (B == 0) throw Error(ErrorKind::InvalidRadius, "B = 0 admits no circular orbit");
        const double x = std::cosh(r0), th = std::tanh(r0);
        o.i_phi = B * (1.0 - x) / x;
        o.alpha = -B / x;
        o.a_transverse = B * B * th * th;
    } else {
        if (r0 >= kPi) throw Error(ErrorKind::InvalidRadius, "r0 must be < pi");
        const double x = std::cos(r0);
        if (std::abs(x) < 1e-12) throw Error(ErrorKind::InvalidRadius, "cos r0 = 0");
        const double tn = std::tan(r0);
        o.i_phi = B * (x - 1.0) / x;
        o.alpha = -B / x;
        o.a_transverse = B * B * tn * tn;
    }
    return o;
}

double axial_solution(SpaceModel m, double epsilon, double A, double t, int sign, double z0) {
    require_curved(m, "axial_solution");
    if (!(epsilon > 0)) throw Error(ErrorKind::RegimeMismatch, "epsilon must be > 0");
    const double se = std::sqrt(epsilon), s = sgn(sign);
    if (m == SpaceModel::Hyperbolic) {
        if (nearly_equal(epsilon, A)) return std::sinh(z0) * std::exp(s * se * t);
        if (epsilon > A) return s * std::sqrt((epsilon - A) / epsilon) * std::sinh(se * t);
        return s * std::sqrt((A - epsilon) / epsilon) * std::cosh(se * t);
    }
    if (nearly_equal(epsilon, A)) {
        if (z0 != 0) throw Error(ErrorKind::RegimeMismatch, "S3 with epsilon = A only allows z = 0");
        return 0.0;
    }
    if (epsilon < A) throw Error(ErrorKind::RegimeMismatch, "S3 requires epsilon > A");
    return s * std::sqrt((epsilon - A) / epsilon) * std::sin(se * t);
}

double transverse_time(SpaceModel m, double epsilon, double A, double t, int sign, double z0) {
    require_curved(m, "transverse_time");
    if (!(epsilon > 0)) throw Error(ErrorKind::RegimeMismatch, "epsilon must be > 0");
    const double se = std::sqrt(epsilon);
    if (m == SpaceModel::Hyperbolic && nearly_equal(epsilon, A)) {
        const double s2 = std::sinh(z0) * std::sinh(z0);
        const double k = 2.0 * se * t;
        if (sgn(sign) > 0) return (std::log1p(s2) - std::log(s2 + std::exp(-k))) / (2.0 * se);
        return (k + std::log1p(s2 * std::exp(-k)) - std::log1p(s2)) / (2.0 * se);
    }
    if (!(A > 0)) throw Error(ErrorKind::InvalidParams, "closed form needs A > 0");
    const double sa = std::sqrt(A);
    if (m == SpaceModel::Hyperbolic) {
        const double k = epsilon > A ? std::sqrt(A / epsilon) : std::sqrt(epsilon / A);
        return std::atanh(k * std::tanh(se * t)) / sa;
    }
    if (nearly_equal(epsilon, A)) {
        if (z0 != 0) throw Error(ErrorKind::RegimeMismatch, "S3 with epsilon = A only allows z = 0");
        return t;
    }
    if (epsilon < A) throw Error(ErrorKind::RegimeMismatch, "S3 requires epsilon > A");
    const double s = se * t;
    if (!std::isfinite(s)) throw Error(ErrorKind::BranchError, "non-finite time");
    // Continue arctan across the poles of tan: one branch of width pi per half period.
    const double n = std::round(s / kPi);
    const double psi = n * kPi + std::atan(std::sqrt(A / epsilon) * std::tan(s - n * kPi));
    return psi / sa;
}

double azimuth_solution(SpaceModel m, double epsilon, double A, double alpha, double t, int sign,
                        double z0) {
    if (t == 0) return 0.0;
    return alpha * transverse_time(m, epsilon, A, t, sign, z0);
}

double radial_phase(SpaceModel m, double B, double I, double A, double r0, double vr0) {
    require_curved(m, "radial_phase");
    const RadialQuadratic q = radial_quadratic(m, B, I, A);
    const double x = radial_x(m, r0);
    if (q.a == 0) {
        if (!(q.b > 0)) throw Error(ErrorKind::RegimeMismatch, "a = 0 needs b > 0");
        return std::copysign(std::sqrt(std::max(0.0, q.b * x + q.c)), vr0);
    }
    if (q.double_root || q.disc <= 0)
        throw Error(ErrorKind::RegimeMismatch, "no radial phase for fixed-radius or non-physical motion");
    const RadialForm f = radial_form(m, q);
    const double y = radial_y(f, q, x);
    if (f.finite) {
        const double th = std::asin(clamp_unit(y, "radial arcsin"));
        return vr0 >= 0 ? th : kPi - th;
    }
    if (y < 1.0 - kDomainTol) throw Error(ErrorKind::DomainError, "radial arccosh argument below 1");
    return std::copysign(std::acosh(std::max(1.0, y)), vr0);
}

double radial_solution(SpaceModel m, double B, double I, double A, double epsilon, double t,
                       double phase) {
    require_curved(m, "radial_solution");
    const TrajectoryClass tc = classify(m, B, I, A, epsilon);
    if (!tc.physical()) throw Error(ErrorKind::RegimeMismatch, "non-physical parameters");
    if (!(epsilon > A) || nearly_equal(epsilon, A))
        throw Error(ErrorKind::Unsupported, "radial time course is available for epsilon > A only");
    const RadialQuadratic q = radial_quadratic(m, B, I, A);
    if (tc.radial == RadialClass::FixedRadius) return q.roots->first;
    const double tau = transverse_time(m, epsilon, A, t, 1, 0.0);
    if (tc.radial == RadialClass::InfiniteCritical) {
        const double w = phase + 0.5 * q.b * tau;
        return (w * w - q.c) / q.b;
    }
    const RadialForm f = radial_form(m, q);
    const double th = phase + f.rate * tau;
    return x_from_y(f, q, f.finite ? std::sin(th) : std::cosh(th));
}

double rphi_offset(SpaceModel m, double B, const CylState& s) {
    require_curved(m, "rphi_offset");
    const MotionConstants mc = invariants_of(m, B, s);
    const CanonicalParams cp = canonical_parameters(m, B, mc.i_phi, mc.a_transverse);
    const bool hyp = m == SpaceModel::Hyperbolic;
    const double r = s.point.r, ph = s.point.phi;
    const double sr = hyp ? std::sinh(r) : std::sin(r);
    const double cr = hyp ? std::cosh(r) : std::cos(r);
    const double cp_ = std::cos(ph), sp = std::sin(ph);
    const double X = sr * cp_, Y = sr * sp;
    const double Xd = cr * s.vr * cp_ - sr * sp * s.vphi;
    const double Yd = cr * s.vr * sp + sr * cp_ * s.vphi;
    // C (X cos phi_c + Y sin phi_c) = rhs1 and its time derivative.
    const double rhs1 = hyp ? cp.j * cr - B : B - cp.j * cr;
    const double rhs2 = cp.j * sr * s.vr;
    const double det = X * Yd - Y * Xd;
    if (!(std::abs(det) > 1e-12 * (std::abs(X * Yd) + std::abs(Y * Xd))))
        throw Error(ErrorKind::DomainError, "azimuth offset undefined for dphi/dt = 0");
    const double P = (rhs1 * Yd - rhs2 * Y) / det;
    const double Q = (X * rhs2 - Xd * rhs1) / det;
    return std::atan2(Q, P);
}

double trajectory_surface_rphi(SpaceModel m, double B, double I, double A, const CylPoint& p,
                               double phi_offset) {
    const CanonicalParams cp = canonical_parameters(m, B, I, A);
    const double c = std::cos(p.phi - phi_offset);
    if (m == SpaceModel::Hyperbolic)
        return cp.j * std::cosh(p.r) - cp.c_par * std::sinh(p.r) * c - B;
    return cp.j * std::cos(p.r) + cp.c_par * std::sin(p.r) * c - B;
}

double axial_phase(SpaceModel m, double epsilon, double A, double z, const AxialBranch& br) {
    require_curved(m, "axial_phase");
    if (!(A > 0)) throw Error(ErrorKind::InvalidParams, "axial phase needs A > 0");
    if (nearly_equal(epsilon, A)) throw Error(ErrorKind::RegimeMismatch, "epsilon = A has no axial phase");
    const double sa = std::sqrt(A);
    if (m == SpaceModel::Hyperbolic) {
        if (epsilon > A) {
            if (br.sheet != 0) throw Error(ErrorKind::RegimeMismatch, "type I motion has a single sheet");
            return std::asinh(sgn(br.sign) * std::sqrt(A / (epsilon - A)) * std::tanh(z)) / sa;
        }
        const double w = std::sqrt(A / (A - epsilon)) * std::abs(std::tanh(z));
        if (w < 1.0 - kDomainTol) throw Error(ErrorKind::DomainError, "arccosh argument below 1");
        const double p = std::acosh(std::max(1.0, w)) / sa;
        return br.sheet == 0 ? -p : p;
    }
    if (epsilon < A) throw Error(ErrorKind::RegimeMismatch, "S3 requires epsilon > A");
    const double w = clamp_unit(sgn(br.sign) * std::sqrt(A / (epsilon - A)) * std::tan(z), "axial arcsin");
    const double psi0 = std::asin(w);
    const double psi = br.sheet * kPi + (br.sheet % 2 == 0 ? psi0 : -psi0);
    return psi / sa;
}

RzAnchor rz_anchor(SpaceModel m, double B, const CylState& s) {
    require_curved(m, "rz_anchor");
    const MotionConstants mc = invariants_of(m, B, s);
    const double I = mc.i_phi, A = mc.a_transverse, eps = mc.epsilon;
    const RadialQuadratic q = radial_quadratic(m, B, I, A);
    const RadialForm f = radial_form(m, q);
    RzAnchor an;
    if (m == SpaceModel::Hyperbolic && eps < A) {
        an.branch.sign = s.point.z >= 0 ? 1 : -1;
        an.branch.sheet = s.point.z * s.vz < 0 ? 0 : 1;
    } else {
        an.branch.sign = s.vz >= 0 ? 1 : -1;
        an.branch.sheet = 0;
    }
    const double th0 = radial_phase(m, B, I, A, s.point.r, s.vr);
    an.phase = th0 - f.rate * axial_phase(m, eps, A, s.point.z, an.branch);
    return an;
}

double trajectory_surface_rz(SpaceModel m, double B, double I, double A, double epsilon,
                             const CylPoint& p, const AxialBranch& br, double phase) {
    require_curved(m, "trajectory_surface_rz");
    const TrajectoryClass tc = classify(m, B, I, A, epsilon);
    if (!tc.physical()) throw Error(ErrorKind::RegimeMismatch, "non-physical parameters");
    const bool four_cases = tc.radial == RadialClass::FiniteTwoTurning ||
                            tc.radial == RadialClass::InfiniteOneTurning ||
                            tc.radial == RadialClass::SphericalFinite;
    if (!four_cases || (tc.axial != AxialClass::TypeI && tc.axial != AxialClass::TypeII))
        throw Error(ErrorKind::RegimeMismatch, "no F(r, z) relation for this class");
    const RadialQuadratic q = radial_quadratic(m, B, I, A);
    const RadialForm f = radial_form(m, q);
    const double lhs = radial_y(f, q, radial_x(m, p.r));
    const double th = phase + f.rate * axial_phase(m, epsilon, A, p.z, br);
    return lhs - (f.finite ? std::sin(th) : std::cosh(th));
}

CanonicalParams canonical_parameters(SpaceModel m, double B, double I, double A) {
    require_curved(m, "canonical_parameters");
    CanonicalParams cp;
    double rad;
    if (m == SpaceModel::Hyperbolic) {
        cp.j = I + B;
        rad = cp.j * cp.j + A - B * B;
        cp.invariant_value = B * B - A;
    } else {
        cp.j = B - I;
        rad = A + B * B - cp.j * cp.j;
        cp.invariant_value = A + B * B;
    }
    const double tol = 1e-12 * std::max({1.0, A, B * B, cp.j * cp.j});
    if (rad < -tol) throw Error(ErrorKind::InvalidParams, "negative radicand in C");
    cp.c_par = std::sqrt(std::max(0.0, rad));
    return cp;
}

CanonicalParams transform_parameters(SpaceModel m, const TransversalShift& s,
                                     const CanonicalParams& cp) {
    require_curved(m, "transform_parameters");
    if (s.plane == ShiftPlane::Plane03)
        throw Error(ErrorKind::Unsupported, "Plane03 shifts do not act on (J, C)");
    if (s.amount == 0) return cp;
    CanonicalParams out;
    if (m == SpaceModel::Hyperbolic) {
        const double ch = std::cosh(s.amount), sh = std::sinh(s.amount);
        out.j = cp.j * ch + cp.c_par * sh;
        out.c_par = cp.j * sh + cp.c_par * ch;
        out.invariant_value = (out.j - out.c_par) * (out.j + out.c_par);
    } else {
        const double c = std::cos(s.amount), sn = std::sin(s.amount);
        out.j = cp.j * c + cp.c_par * sn;
        out.c_par = -cp.j * sn + cp.c_par * c;
        out.invariant_value = out.j * out.j + out.c_par * out.c_par;
    }
    return out;
}

}  // namespace curvedmag
