// Independent reference computations used by the unit and acceptance tests.
#pragma once

#include <array>
#include <cmath>
#include <random>

#include "curvedmag/dynamics.hpp"
#include "curvedmag/geometry.hpp"

namespace oracle {

using curvedmag::CylPoint;
using curvedmag::CylState;
using curvedmag::SpaceModel;

// Metric pieces written out by hand: g = cz2 (dr^2 + S^2 dphi^2) + dz^2, A_phi(r).
struct Pieces {
    double cz2, dcz2_dz, S, dS_dr, dA_dr;
};

inline Pieces pieces(SpaceModel m, double B, double r, double z) {
    switch (m) {
        case SpaceModel::Hyperbolic:
            return {std::cosh(z) * std::cosh(z), 2 * std::cosh(z) * std::sinh(z), std::sinh(r), std::cosh(r),
                    -B * std::sinh(r)};
        case SpaceModel::Spherical:
            return {std::cos(z) * std::cos(z), -2 * std::cos(z) * std::sin(z), std::sin(r), std::cos(r),
                    -B * std::sin(r)};
        default:
            return {1.0, 0.0, r, 1.0, -B * r};
    }
}

inline double metric_component(SpaceModel m, int i, double r, double z) {
    const Pieces p = pieces(m, 0.0, r, z);
    if (i == 0) return p.cz2;
    if (i == 1) return p.cz2 * p.S * p.S;
    return 1.0;
}

// Gamma^a_bc from central differences of the diagonal metric.
inline std::array<std::array<std::array<double, 3>, 3>, 3> fd_christoffel(SpaceModel m, const CylPoint& p,
                                                                          double h = 1e-5) {
    auto dg = [&](int i, int k) {  // d_k g_ii
        if (k == 1) return 0.0;
        if (k == 0) return (metric_component(m, i, p.r + h, p.z) - metric_component(m, i, p.r - h, p.z)) / (2 * h);
        return (metric_component(m, i, p.r, p.z + h) - metric_component(m, i, p.r, p.z - h)) / (2 * h);
    };
    std::array<std::array<std::array<double, 3>, 3>, 3> g{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double s = 0;
                if (a == c) s += dg(a, b);
                if (a == b) s += dg(a, c);
                if (b == c) s -= dg(b, a);
                g[a][b][c] = 0.5 * s / metric_component(m, a, p.r, p.z);
            }
    return g;
}

// Euler-Lagrange equations of L = g(v, v)/2 - A_phi(r) dphi/dt, expanded by hand.
inline curvedmag::Acceleration lagrange_acceleration(SpaceModel m, double B, const CylState& s) {
    const Pieces p = pieces(m, B, s.point.r, s.point.z);
    const double vr = s.vr, vp = s.vphi, vz = s.vz;
    curvedmag::Acceleration a;
    a.ar = (p.cz2 * p.S * p.dS_dr * vp * vp - p.dA_dr * vp - p.dcz2_dz * vz * vr) / p.cz2;
    a.aphi = (p.dA_dr * vr - (p.dcz2_dz * vz * p.S * p.S + 2 * p.cz2 * p.S * p.dS_dr * vr) * vp) /
             (p.cz2 * p.S * p.S);
    a.az = 0.5 * p.dcz2_dz * (vr * vr + p.S * p.S * vp * vp);
    return a;
}

// (r, phi) of the preimage under the shift as a function of the shifted chart point.
struct PlanarJacobian {
    double dr_dr, dr_dphi, dphi_dr, dphi_dphi;
};

inline PlanarJacobian fd_pullback_jacobian(SpaceModel m, const curvedmag::TransversalShift& s,
                                           const CylPoint& q, double h = 1e-5) {
    const auto back = s.inverse();
    auto map = [&](double r, double phi) { return curvedmag::shift_pullback_cyl(m, back, {r, phi, q.z}); };
    const CylPoint rp = map(q.r + h, q.phi), rm = map(q.r - h, q.phi);
    const CylPoint pp = map(q.r, q.phi + h), pm = map(q.r, q.phi - h);
    const double tau = 2 * M_PI;
    return {(rp.r - rm.r) / (2 * h), (pp.r - pm.r) / (2 * h), std::remainder(rp.phi - rm.phi, tau) / (2 * h),
            std::remainder(pp.phi - pm.phi, tau) / (2 * h)};
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
