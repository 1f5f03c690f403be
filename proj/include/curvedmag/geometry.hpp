//! Charts, embeddings, metric data and the shift group for H3, S3 and E3.
#pragma once

#include <array>
#include <string_view>

#include "curvedmag/errors.hpp"

namespace curvedmag {

enum class SpaceModel { Hyperbolic, Spherical, Euclidean };

std::string_view to_string(SpaceModel m);
SpaceModel parse_model(std::string_view name);

inline constexpr double kRMin = 1e-10;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

//! Cylindrical chart point (r, phi, z).
struct CylPoint {
    double r = 0;
    double phi = 0;
    double z = 0;
};

//! Embedding coordinates in the flat 4-space.
struct AmbientPoint {
    double u0 = 1;
    double u1 = 0;
    double u2 = 0;
    double u3 = 0;

    std::array<double, 4> as_array() const { return {u0, u1, u2, u3}; }
};

enum class ShiftPlane { Plane01, Plane02, Plane03 };

//! Rapidity (H3) or rotation angle (S3) in a coordinate plane of the embedding.
struct TransversalShift {
    ShiftPlane plane = ShiftPlane::Plane01;
    double amount = 0;

    TransversalShift inverse() const { return {plane, -amount}; }
};

//! gamma[i][j][k] = Gamma^i_{jk}, indices ordered (r, phi, z).
struct ChristoffelTable {
    std::array<std::array<std::array<double, 3>, 3>, 3> gamma{};
};

//! Diagonal spatial metric (g_rr, g_phiphi, g_zz).
struct MetricDiag {
    double g_rr = 1;
    double g_pp = 1;
    double g_zz = 1;

    double sqrt_det() const;
};

double normalize_angle(double phi);

//! Throws ChartDomain when p lies outside the chart of the model.
void check_chart(SpaceModel m, const CylPoint& p);

//! Embedding quadratic form minus one: u0^2 - |u|^2 - 1 (H3) or |u|^2 - 1 (S3).
double embedding_defect(SpaceModel m, const AmbientPoint& u);

AmbientPoint to_ambient(SpaceModel m, const CylPoint& p);
CylPoint from_ambient(SpaceModel m, const AmbientPoint& u);

MetricDiag metric(SpaceModel m, const CylPoint& p);
ChristoffelTable christoffel(SpaceModel m, const CylPoint& p, double r_min = kRMin);

AmbientPoint apply_shift(SpaceModel m, const TransversalShift& s, const AmbientPoint& u);

//! Image of p under the shift expressed in the chart (Plane01/Plane02 only).
CylPoint shift_pullback_cyl(SpaceModel m, const TransversalShift& s, const CylPoint& p);

//! sinh r' / sinh r (H3) or sin r' / sin r (S3).
double shift_jacobian(SpaceModel m, const TransversalShift& s, const CylPoint& p_shifted,
                      const CylPoint& p);

//! Jacobian matrix d(r, phi, z)/d(r', phi', z') of the map taking shifted
//! coordinates back to original ones, obtained by the chain rule through the
//! embedding. Row index: original coordinate; column: shifted coordinate.
using Matrix3 = std::array<std::array<double, 3>, 3>;
Matrix3 inverse_shift_jacobian(SpaceModel m, const TransversalShift& s,
                               const CylPoint& p_shifted);

}  // namespace curvedmag
