#include "curvedmag/field.hpp"

#include <cmath>
#include <numbers>

namespace curvedmag {

namespace {

void require_gauge_plane(const TransversalShift& s) {
    if (s.plane == ShiftPlane::Plane03)
        throw Error(ErrorKind::Unsupported, "no gauge function for Plane03 shifts");
    if (s.amount == 0) throw Error(ErrorKind::DegenerateShift, "zero shift has no gauge function");
}

// Plane02 reduces to Plane01 in the azimuth frame rotated by pi/2.
double plane01_azimuth(const TransversalShift& s, double phi) {
    return s.plane == ShiftPlane::Plane02 ? phi - std::numbers::pi / 2 : phi;
}

GaugeEvaluation partials01(SpaceModel m, double amount, double B, double r, double phi) {
    GaugeEvaluation g;
    const double cp = std::cos(phi), sp = std::sin(phi);
    if (m == SpaceModel::Hyperbolic) {
        const double c = std::cosh(amount), s = std::sinh(amount);
        const double ch = std::cosh(r), sh = std::sinh(r);
        const double d = 1.0 + c * ch - s * sh * cp;
        g.dLambda_dr = B * s * sp / d;
        g.dLambda_dphi = B * ((ch - 1.0) * (1.0 - c) + s * sh * cp) / d;
    } else {
        const double c = std::cos(amount), s = std::sin(amount);
        const double cr = std::cos(r), sr = std::sin(r);
        const double d = 1.0 + c * cr - s * sr * cp;
        if (d == 0) throw Error(ErrorKind::AxisSingularity, "preimage is the antipodal axis");
        g.dLambda_dr = -B * s * sp / d;
        g.dLambda_dphi = -B * ((cr - 1.0) * (1.0 - c) + s * sr * cp) / d;
    }
    return g;
}

}  // namespace

double potential_phi(SpaceModel m, double B, double r) {
    switch (m) {
        case SpaceModel::Hyperbolic: return -B * (std::cosh(r) - 1.0);
        case SpaceModel::Spherical: return B * (std::cos(r) - 1.0);
        case SpaceModel::Euclidean: return -B * r * r / 2.0;
    }
    return 0;
}

double field_strength(SpaceModel m, double B, double r) {
    switch (m) {
        case SpaceModel::Hyperbolic: return B * std::sinh(r);
        case SpaceModel::Spherical: return B * std::sin(r);
        case SpaceModel::Euclidean: return B * r;
    }
    return 0;
}

double maxwell_residual(SpaceModel m, double B, const CylPoint& p, double h) {
    check_chart(m, p);
    if (p.r <= kRMin || p.r - h <= 0)
        throw Error(ErrorKind::AxisSingularity, "Maxwell residual needs r > 0");
    auto density = [&](double r) {
        const CylPoint q{r, p.phi, p.z};
        const MetricDiag g = metric(m, q);
        const double f_up = -field_strength(m, B, r) / (g.g_rr * g.g_pp);  // F^{r phi}
        return g.sqrt_det() * f_up;
    };
    const double d = (density(p.r + h) - density(p.r - h)) / (2.0 * h);
    return d / metric(m, p).sqrt_det();
}

GaugeEvaluation gauge_partials(SpaceModel m, const TransversalShift& s, double B,
                               const CylPoint& p_shifted) {
    if (m == SpaceModel::Euclidean) throw Error(ErrorKind::Unsupported, "no shifts in Euclidean space");
    require_gauge_plane(s);
    check_chart(m, p_shifted);
    return partials01(m, s.amount, B, p_shifted.r, plane01_azimuth(s, p_shifted.phi));
}

GaugeEvaluation gauge_function(SpaceModel m, const TransversalShift& s, double B,
                               const CylPoint& p_shifted) {
    GaugeEvaluation g = gauge_partials(m, s, B, p_shifted);
    const double phi = plane01_azimuth(s, p_shifted.phi);
    const double r = p_shifted.r;
    if (m == SpaceModel::Hyperbolic) {
        const double c = std::cosh(s.amount), sn = std::sinh(s.amount);
        const double den = sn * std::sinh(r) * std::sin(phi);
        if (den == 0) throw Error(ErrorKind::BranchSingularity, "arctan branch point sin(phi') = 0");
        const double num = (c - 1.0) * (std::cosh(r) - 1.0) - sn * std::sinh(r) * std::cos(phi);
        g.lambda_value = 2.0 * B * std::atan(num / den) - 2.0 * B * phi;
    } else {
        const double c = std::cos(s.amount), sn = std::sin(s.amount);
        const double den = sn * std::sin(r) * std::sin(phi);
        if (den == 0) throw Error(ErrorKind::BranchSingularity, "arctan branch point sin(phi') = 0");
        const double num = (1.0 - c) * (1.0 - std::cos(r)) - sn * std::sin(r) * std::cos(phi);
        g.lambda_value = -2.0 * B * std::atan(num / den) + 2.0 * B * phi;
    }
    return g;
}

PulledBackField pullback_field(SpaceModel m, const TransversalShift& s, double B,
                               const CylPoint& p_shifted) {
    const Matrix3 j = inverse_shift_jacobian(m, s, p_shifted);
    const CylPoint p = from_ambient(m, apply_shift(m, s.inverse(), to_ambient(m, p_shifted)));
    const double f = field_strength(m, B, p.r);
    // F'_{ab} = f (J^phi_a J^r_b - J^r_a J^phi_b), coordinates ordered (r, phi, z).
    auto comp = [&](int a, int b) { return f * (j[1][a] * j[0][b] - j[0][a] * j[1][b]); };
    return {comp(1, 0), comp(1, 2), comp(0, 2)};
}

PulledBackPotential pullback_potential(SpaceModel m, const TransversalShift& s, double B,
                                       const CylPoint& p_shifted) {
    const Matrix3 j = inverse_shift_jacobian(m, s, p_shifted);
    const CylPoint p = from_ambient(m, apply_shift(m, s.inverse(), to_ambient(m, p_shifted)));
    const double a = potential_phi(m, B, p.r);
    return {a * j[1][0], a * j[1][1], a * j[1][2]};
}

double verify_field_invariance(SpaceModel m, const TransversalShift& s, double B,
                               const CylPoint& p) {
    if (s.plane == ShiftPlane::Plane03)
        throw Error(ErrorKind::Unsupported, "Plane03 shifts do not preserve the field");
    if (s.amount == 0) return 0.0;
    const CylPoint q = shift_pullback_cyl(m, s, p);
    const PulledBackField f = pullback_field(m, s, B, q);
    return std::abs(f.f_phi_r - field_strength(m, B, q.r));
}

}  // namespace curvedmag
