#include "curvedmag/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace curvedmag {

namespace {

constexpr double kEmbedTol = 1e-9;

void require_curved(SpaceModel m, const char* op) {
    if (m == SpaceModel::Euclidean)
        throw Error(ErrorKind::Unsupported, std::string(op) + " has no embedding for Euclidean space");
}

// Apply the 4x4 shift matrix. Only the u0 row and the row of the mixed axis change.
AmbientPoint shift_matrix_apply(SpaceModel m, const TransversalShift& s, const AmbientPoint& u) {
    double c, sn, sk;
    if (m == SpaceModel::Hyperbolic) {
        c = std::cosh(s.amount);
        sn = std::sinh(s.amount);
        sk = sn;
    } else {
        c = std::cos(s.amount);
        sn = std::sin(s.amount);
        sk = -sn;
    }
    std::array<double, 4> v = u.as_array();
    const int k = s.plane == ShiftPlane::Plane01 ? 1 : s.plane == ShiftPlane::Plane02 ? 2 : 3;
    const double v0 = v[0], vk = v[k];
    v[0] = c * v0 + sn * vk;
    v[k] = sk * v0 + c * vk;
    const AmbientPoint out{v[0], v[1], v[2], v[3]};
    return out;
}

void check_embedding(SpaceModel m, const AmbientPoint& u) {
    const double scale = std::max(1.0, u.u0 * u.u0);
    if (!(std::abs(embedding_defect(m, u)) <= kEmbedTol * scale))
        throw Error(ErrorKind::EmbeddingViolation, "point is not on the model surface");
    if (m == SpaceModel::Hyperbolic && u.u0 <= 0)
        throw Error(ErrorKind::EmbeddingViolation, "point lies on the lower sheet");
}

}  // namespace

std::string_view to_string(SpaceModel m) {
    switch (m) {
        case SpaceModel::Hyperbolic: return "Hyperbolic";
        case SpaceModel::Spherical: return "Spherical";
        case SpaceModel::Euclidean: return "Euclidean";
    }
    return "?";
}

SpaceModel parse_model(std::string_view name) {
    if (name == "Hyperbolic" || name == "hyperbolic" || name == "H3") return SpaceModel::Hyperbolic;
    if (name == "Spherical" || name == "spherical" || name == "S3") return SpaceModel::Spherical;
    if (name == "Euclidean" || name == "euclidean" || name == "E3") return SpaceModel::Euclidean;
    throw Error(ErrorKind::InvalidArgument, "unknown space model '" + std::string(name) + "'");
}

double MetricDiag::sqrt_det() const { return std::sqrt(g_rr * g_pp * g_zz); }

double normalize_angle(double phi) {
    double a = std::fmod(phi, kTwoPi);
    if (a < 0) a += kTwoPi;
    if (a >= kTwoPi) a = 0;
    return a;
}

void check_chart(SpaceModel m, const CylPoint& p) {
    if (!std::isfinite(p.r) || !std::isfinite(p.phi) || !std::isfinite(p.z))
        throw Error(ErrorKind::ChartDomain, "non-finite coordinate");
    if (p.r < 0) throw Error(ErrorKind::ChartDomain, "negative radius");
    if (m == SpaceModel::Spherical) {
        if (p.r > std::numbers::pi) throw Error(ErrorKind::ChartDomain, "r exceeds pi");
        if (std::abs(p.z) >= std::numbers::pi / 2)
            throw Error(ErrorKind::ChartDomain, "|z| reaches the pole pi/2");
    }
}

double embedding_defect(SpaceModel m, const AmbientPoint& u) {
    const double t = u.u1 * u.u1 + u.u2 * u.u2 + u.u3 * u.u3;
    if (m == SpaceModel::Hyperbolic) return u.u0 * u.u0 - t - 1.0;
    return u.u0 * u.u0 + t - 1.0;
}

AmbientPoint to_ambient(SpaceModel m, const CylPoint& p) {
    require_curved(m, "to_ambient");
    check_chart(m, p);
    const double cp = std::cos(p.phi), sp = std::sin(p.phi);
    if (m == SpaceModel::Hyperbolic) {
        const double cz = std::cosh(p.z), sr = std::sinh(p.r);
        return {cz * std::cosh(p.r), cz * sr * cp, cz * sr * sp, std::sinh(p.z)};
    }
    const double cz = std::cos(p.z), sr = std::sin(p.r);
    return {cz * std::cos(p.r), cz * sr * cp, cz * sr * sp, std::sin(p.z)};
}

CylPoint from_ambient(SpaceModel m, const AmbientPoint& u) {
    require_curved(m, "from_ambient");
    check_embedding(m, u);
    const double rho = std::hypot(u.u1, u.u2);
    CylPoint p;
    p.phi = rho > 0 ? normalize_angle(std::atan2(u.u2, u.u1)) : 0.0;
    if (m == SpaceModel::Hyperbolic) {
        p.z = std::asinh(u.u3);
        p.r = std::asinh(rho / std::sqrt(1.0 + u.u3 * u.u3));
    } else {
        const double cz = std::hypot(u.u0, rho);
        if (cz == 0 || std::abs(u.u3) >= 1.0)
            throw Error(ErrorKind::ChartDomain, "point is a pole z = +-pi/2");
        p.z = std::atan2(u.u3, cz);
        if (std::abs(p.z) >= std::numbers::pi / 2)
            throw Error(ErrorKind::ChartDomain, "point is a pole z = +-pi/2");
        p.r = std::atan2(rho, u.u0);
    }
    return p;
}

MetricDiag metric(SpaceModel m, const CylPoint& p) {
    check_chart(m, p);
    switch (m) {
        case SpaceModel::Hyperbolic: {
            const double c2 = std::cosh(p.z) * std::cosh(p.z), s = std::sinh(p.r);
            return {c2, c2 * s * s, 1.0};
        }
        case SpaceModel::Spherical: {
            const double c2 = std::cos(p.z) * std::cos(p.z), s = std::sin(p.r);
            return {c2, c2 * s * s, 1.0};
        }
        case SpaceModel::Euclidean: return {1.0, p.r * p.r, 1.0};
    }
    return {};
}

ChristoffelTable christoffel(SpaceModel m, const CylPoint& p, double r_min) {
    check_chart(m, p);
    if (p.r <= r_min || (m == SpaceModel::Spherical && p.r >= std::numbers::pi - r_min))
        throw Error(ErrorKind::AxisSingularity, "Christoffel symbols diverge on the axis");
    enum { R = 0, P = 1, Z = 2 };
    ChristoffelTable t;
    auto& g = t.gamma;
    auto set_sym = [&](int i, int j, int k, double v) {
        g[i][j][k] = v;
        g[i][k][j] = v;
    };
    switch (m) {
        case SpaceModel::Hyperbolic: {
            const double shr = std::sinh(p.r), chr = std::cosh(p.r);
            const double shz = std::sinh(p.z), chz = std::cosh(p.z), thz = std::tanh(p.z);
            set_sym(R, R, Z, thz);
            g[R][P][P] = -shr * chr;
            set_sym(P, R, P, chr / shr);
            set_sym(P, P, Z, thz);
            g[Z][R][R] = -chz * shz;
            g[Z][P][P] = -shz * chz * shr * shr;
            break;
        }
        case SpaceModel::Spherical: {
            const double sr = std::sin(p.r), cr = std::cos(p.r);
            const double sz = std::sin(p.z), cz = std::cos(p.z), tz = std::tan(p.z);
            set_sym(R, R, Z, -tz);
            g[R][P][P] = -sr * cr;
            set_sym(P, R, P, cr / sr);
            set_sym(P, P, Z, -tz);
            g[Z][R][R] = sz * cz;
            g[Z][P][P] = sz * cz * sr * sr;
            break;
        }
        case SpaceModel::Euclidean:
            g[R][P][P] = -p.r;
            set_sym(P, R, P, 1.0 / p.r);
            break;
    }
    return t;
}

AmbientPoint apply_shift(SpaceModel m, const TransversalShift& s, const AmbientPoint& u) {
    require_curved(m, "apply_shift");
    check_embedding(m, u);
    if (!std::isfinite(s.amount)) throw Error(ErrorKind::InvalidArgument, "non-finite shift amount");
    if (s.amount == 0) return u;
    return shift_matrix_apply(m, s, u);
}

CylPoint shift_pullback_cyl(SpaceModel m, const TransversalShift& s, const CylPoint& p) {
    if (s.plane == ShiftPlane::Plane03)
        throw Error(ErrorKind::Unsupported, "Plane03 shifts mix z and act on ambient points only");
    if (s.amount == 0) {
        check_chart(m, p);
        return {p.r, normalize_angle(p.phi), p.z};
    }
    CylPoint q = from_ambient(m, apply_shift(m, s, to_ambient(m, p)));
    q.z = p.z;
    return q;
}

double shift_jacobian(SpaceModel m, const TransversalShift& s, const CylPoint& p_shifted,
                      const CylPoint& p) {
    require_curved(m, "shift_jacobian");
    if (s.plane == ShiftPlane::Plane03)
        throw Error(ErrorKind::Unsupported, "Jacobian defined for Plane01/Plane02 only");
    if (p.r <= kRMin || p_shifted.r <= kRMin)
        throw Error(ErrorKind::AxisSingularity, "shift Jacobian undefined on the axis");
    if (m == SpaceModel::Hyperbolic) return std::sinh(p_shifted.r) / std::sinh(p.r);
    return std::sin(p_shifted.r) / std::sin(p.r);
}

Matrix3 inverse_shift_jacobian(SpaceModel m, const TransversalShift& s, const CylPoint& p_shifted) {
    require_curved(m, "inverse_shift_jacobian");
    check_chart(m, p_shifted);
    const bool hyp = m == SpaceModel::Hyperbolic;
    const double r = p_shifted.r, ph = p_shifted.phi, z = p_shifted.z;
    const double cp = std::cos(ph), sp = std::sin(ph);
    const double ar = hyp ? std::cosh(r) : std::cos(r);
    const double br = hyp ? std::sinh(r) : std::sin(r);
    const double az = hyp ? std::cosh(z) : std::cos(z);
    const double bz = hyp ? std::sinh(z) : std::sin(z);
    const double sg = hyp ? 1.0 : -1.0;  // derivative sign of the cos-type factors

    // Tangent vectors d u' / d(r', phi', z'), one AmbientPoint per column.
    std::array<AmbientPoint, 3> col;
    col[0] = {sg * az * br, az * ar * cp, az * ar * sp, 0.0};
    col[1] = {0.0, -az * br * sp, az * br * cp, 0.0};
    col[2] = {sg * bz * ar, sg * bz * br * cp, sg * bz * br * sp, az};

    const TransversalShift back = s.inverse();
    const AmbientPoint u = shift_matrix_apply(m, back, to_ambient(m, p_shifted));
    const double rho2 = u.u1 * u.u1 + u.u2 * u.u2;
    const double rho = std::sqrt(rho2);
    if (rho <= kRMin) throw Error(ErrorKind::AxisSingularity, "preimage lies on the axis");
    const double denom_r = hyp ? (u.u0 * u.u0 - rho2) : (u.u0 * u.u0 + rho2);
    const double cz = hyp ? std::sqrt(1.0 + u.u3 * u.u3) : std::sqrt(u.u0 * u.u0 + rho2);

    Matrix3 jac{};
    for (int k = 0; k < 3; ++k) {
        // Linear maps carry tangent vectors like points (no embedding check).
        const AmbientPoint du = shift_matrix_apply(m, back, col[k]);
        const double drho = (u.u1 * du.u1 + u.u2 * du.u2) / rho;
        jac[0][k] = (u.u0 * drho - rho * du.u0) / denom_r;
        jac[1][k] = (u.u1 * du.u2 - u.u2 * du.u1) / rho2;
        jac[2][k] = du.u3 / cz;
    }
    return jac;
}

}  // namespace curvedmag
