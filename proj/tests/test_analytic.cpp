#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "curvedmag/analytic.hpp"
#include "curvedmag/errors.hpp"
#include "oracles.hpp"

using namespace curvedmag;

namespace {

constexpr SpaceModel H = SpaceModel::Hyperbolic;
constexpr SpaceModel S = SpaceModel::Spherical;

template <class F>
ErrorKind kind_of(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidArgument;
}

CylState state_at(SpaceModel m, double B, double I, double A, double eps, double x0, int svr, int svz) {
    const double r0 = m == H ? std::acosh(x0) : std::acos(x0);
    return state_from_integrals(m, B, I, A, eps, r0, 0.0, 0.0, svr, svz);
}

}  // namespace

TEST(Quadratic, HandValues) {
    RadialQuadratic q = radial_quadratic(H, 2, -1, 3);
    EXPECT_EQ(q.a, -1);
    EXPECT_EQ(q.b, 4);
    EXPECT_EQ(q.c, -4);
    EXPECT_EQ(q.disc, 0);
    EXPECT_TRUE(q.double_root);
    EXPECT_DOUBLE_EQ(q.roots->first, 2);

    q = radial_quadratic(H, 2, -1, 3.5);
    EXPECT_EQ(q.a, -0.5);
    EXPECT_EQ(q.b, 4);
    EXPECT_EQ(q.c, -4.5);
    EXPECT_EQ(q.disc, 7);
    EXPECT_NEAR(q.roots->first, 4 - std::sqrt(7.0), 1e-14);
    EXPECT_NEAR(q.roots->second, 4 + std::sqrt(7.0), 1e-14);
    EXPECT_NEAR(q.roots->first, 1.35425, 1e-5);
    EXPECT_NEAR(q.roots->second, 6.64575, 1e-5);

    q = radial_quadratic(S, 2, -2, 12);
    EXPECT_EQ(q.a, -16);
    EXPECT_EQ(q.b, 16);
    EXPECT_EQ(q.c, -4);
    EXPECT_EQ(q.disc, 0);
    EXPECT_DOUBLE_EQ(q.roots->first, 0.5);

    q = radial_quadratic(H, 2, -1, 2);
    EXPECT_EQ(q.disc, -8);
    EXPECT_FALSE(q.roots.has_value());
}

TEST(Quadratic, IdentityHyperbolic) {
    std::mt19937_64 g(41);
    for (int i = 0; i < 100000; ++i) {
        const double B = oracle::uniform(g, -3, 3), I = oracle::uniform(g, -3, 3), A = oracle::uniform(g, 0, 5);
        const RadialQuadratic q = radial_quadratic(H, B, I, A);
        const double scale = std::abs(q.a) + std::abs(q.b) + std::abs(q.c);
        ASSERT_NEAR(q.a + q.b + q.c, -I * I, 4e-16 * scale);
    }
}

TEST(Quadratic, IdentitySpherical) {
    std::mt19937_64 g(42);
    for (int i = 0; i < 100000; ++i) {
        const double B = oracle::uniform(g, -3, 3), I = oracle::uniform(g, -3, 3), A = oracle::uniform(g, 0, 5);
        const RadialQuadratic q = radial_quadratic(S, B, I, A);
        const double scale = std::abs(q.a) + std::abs(q.b) + std::abs(q.c);
        ASSERT_NEAR(q.a + q.b + q.c, -I * I, 8e-16 * scale);
        ASSERT_NEAR(q.a - q.b + q.c, -(I - 2 * B) * (I - 2 * B), 8e-16 * scale);
    }
}

TEST(Quadratic, StableRootsNearLinear) {
    // a -> 0: the small root tends to -c/b without cancellation.
    const double B = 1.0, I = 0.5;
    const double A = B * B + 1e-10;
    const RadialQuadratic q = radial_quadratic(H, B, I, A);
    const double lin = -q.c / q.b;
    const double near = std::abs(q.roots->first - lin) < std::abs(q.roots->second - lin) ? q.roots->first : q.roots->second;
    EXPECT_NEAR(near, lin, 1e-8);
    EXPECT_NEAR(q.a * near * near + q.b * near + q.c, 0, 1e-12);
}

TEST(Classify, HandValues) {
    TrajectoryClass c = classify(H, 2, -1, 3, 4);
    EXPECT_EQ(c.radial, RadialClass::FixedRadius);
    EXPECT_EQ(c.axial, AxialClass::TypeI);
    c = classify(H, 1, 0, 2, 3);
    EXPECT_EQ(c.radial, RadialClass::InfiniteOneTurning);
    EXPECT_EQ(c.axial, AxialClass::TypeI);
    EXPECT_NEAR(radial_quadratic(H, 1, 0, 2).roots->second, 1.0, 1e-15);
    EXPECT_EQ(classify(H, 2, -1, 2, 3).radial, RadialClass::NonPhysical);
    EXPECT_EQ(classify(H, 2, -1, 3.5, 4).radial, RadialClass::FiniteTwoTurning);
    EXPECT_EQ(classify(H, 1, 0, 1, 2).radial, RadialClass::InfiniteCritical);
    EXPECT_EQ(classify(H, 2, -1, 3, 2).axial, AxialClass::TypeII);
    EXPECT_EQ(classify(H, 2, -1, 3, 3, 0.0).axial, AxialClass::CriticalPlane);
    EXPECT_EQ(classify(H, 2, -1, 3, 3, 0.4).axial, AxialClass::CriticalExp);
    EXPECT_EQ(classify(S, 2, -2, 12, 16).radial, RadialClass::FixedRadius);
    EXPECT_EQ(classify(S, 2, -2, 12.5, 16).radial, RadialClass::SphericalFinite);
    EXPECT_EQ(classify(S, 2, -2, 12, 10).axial, AxialClass::NonPhysical);
}

TEST(Classify, SphericalIsNeverInfinite) {
    std::mt19937_64 g(43);
    for (int i = 0; i < 20000; ++i) {
        const double B = oracle::uniform(g, -3, 3), I = oracle::uniform(g, -4, 4), A = oracle::uniform(g, 0, 6);
        const TrajectoryClass c = classify(S, B, I, A, A + oracle::uniform(g, 0, 3));
        ASSERT_TRUE(c.radial == RadialClass::FixedRadius || c.radial == RadialClass::SphericalFinite ||
                    c.radial == RadialClass::NonPhysical);
        ASSERT_NE(c.axial, AxialClass::TypeII);
    }
}

TEST(Classify, AgreesWithIntegratedStates) {
    // Classes from random states match what the integrator does with the radius.
    std::mt19937_64 g(44);
    int finite = 0, infinite = 0;
    for (int i = 0; i < 200; ++i) {
        CylState s;
        s.point = {oracle::uniform(g, 0.3, 1.5), 0.0, 0.0};
        s.vr = oracle::uniform(g, -1, 1);
        s.vphi = oracle::uniform(g, -1, 1) / std::sinh(s.point.r);
        s.vz = oracle::uniform(g, 0.1, 1);
        const double B = oracle::uniform(g, -2, 2);
        const MotionConstants c = invariants_of(H, B, s);
        const TrajectoryClass tc = classify(H, B, c.i_phi, c.a_transverse, c.epsilon, 0.0);
        ASSERT_TRUE(tc.physical());
        const RadialQuadratic q = radial_quadratic(H, B, c.i_phi, c.a_transverse);
        const double x0 = std::cosh(s.point.r);
        ASSERT_GE(q.a * x0 * x0 + q.b * x0 + q.c, -1e-12);
        if (tc.radial == RadialClass::FiniteTwoTurning) {
            ++finite;
            ASSERT_LE(q.roots->first, x0 + 1e-12);
            ASSERT_GE(q.roots->second, x0 - 1e-12);
        } else if (tc.radial == RadialClass::InfiniteOneTurning) {
            ++infinite;
        }
    }
    EXPECT_GT(finite, 0);
    EXPECT_GT(infinite, 0);
}

TEST(FixedRadius, HandValues) {
    FixedRadiusOrbit o = fixed_radius_orbit(H, 2, std::acosh(2.0));
    EXPECT_NEAR(o.i_phi, -1, 1e-14);
    EXPECT_NEAR(o.alpha, -1, 1e-14);
    EXPECT_NEAR(o.a_transverse, 3, 1e-14);
    o = fixed_radius_orbit(S, 2, M_PI / 3);
    EXPECT_NEAR(o.i_phi, -2, 1e-14);
    EXPECT_NEAR(o.alpha, -4, 1e-13);
    EXPECT_NEAR(o.a_transverse, 12, 1e-13);
    o = fixed_radius_orbit(H, 1.5, 1e-6);
    EXPECT_NEAR(o.i_phi, 0, 1e-11);
    EXPECT_NEAR(o.alpha, -1.5, 1e-11);
    EXPECT_NEAR(o.a_transverse, 0, 1e-11);
    EXPECT_THROW(fixed_radius_orbit(H, 1, -0.5), Error);
}

TEST(FixedRadius, DoubleRootProperty) {
    std::mt19937_64 g(45);
    for (SpaceModel m : {H, S})
        for (int i = 0; i < 2000; ++i) {
            const double B = oracle::uniform(g, 0.2, 3) * (i % 2 ? 1 : -1);
            double r0 = m == H ? oracle::uniform(g, 0.05, 3) : oracle::uniform(g, 0.05, M_PI - 0.05);
            if (m == S && std::abs(std::cos(r0)) < 0.05) continue;
            const FixedRadiusOrbit o = fixed_radius_orbit(m, B, r0);
            const RadialQuadratic q = radial_quadratic(m, B, o.i_phi, o.a_transverse);
            ASSERT_LE(std::abs(q.disc), 1e-10 * std::max({1.0, q.b * q.b, std::abs(4 * q.a * q.c)}));
            if (m == H) {
                ASSERT_GT(B * o.i_phi + o.a_transverse, -1e-12);  // I B + A >= 0 for the circle
                ASSERT_NEAR(std::cosh(r0), B / (o.i_phi + B), 1e-9 * std::cosh(r0));
            }
        }
}

TEST(Axial, HandValues) {
    for (double t : {0.0, 0.3, 1.1})
        EXPECT_NEAR(axial_solution(H, 4, 3, t, 1, 0), 0.5 * std::sinh(2 * t), 1e-14 * std::max(1.0, std::sinh(2 * t)));
    EXPECT_EQ(axial_solution(H, 3, 3, 2.0, 1, 0.0), 0.0);
    for (double t : {0.0, 0.2, 0.7}) EXPECT_NEAR(axial_solution(S, 16, 12, t, 1, 0), 0.5 * std::sin(4 * t), 1e-15);
    EXPECT_NEAR(axial_solution(H, 3, 4, 0, 1, 0), std::sqrt(1.0 / 3.0), 1e-15);
    EXPECT_EQ(kind_of([] { axial_solution(S, 10, 12, 1, 1, 0); }), ErrorKind::RegimeMismatch);
}

TEST(Azimuth, HandValues) {
    for (SpaceModel m : {H, S}) EXPECT_EQ(azimuth_solution(m, 16, 12, -4, 0.0, 1, 0.0), 0.0);
    // Finite rotation angle as t grows.
    const double limit = -std::atanh(std::sqrt(0.75)) / std::sqrt(3.0);
    EXPECT_NEAR(azimuth_solution(H, 4, 3, -1, 100.0, 1, 0), limit, 1e-8);
    const double lim2 = -std::atanh(std::sqrt(2.0 / 3.0)) / std::sqrt(3.0);
    EXPECT_NEAR(azimuth_solution(H, 2, 3, -1, 100.0, 1, 0), lim2, 1e-8);
    // One full arctan branch per axial half period.
    EXPECT_NEAR(azimuth_solution(S, 16, 12, -4, M_PI / 4, 1, 0), -4 / std::sqrt(12.0) * M_PI, 1e-12);
    EXPECT_NEAR(azimuth_solution(S, 16, 12, -4, M_PI / 2, 1, 0), -8 / std::sqrt(12.0) * M_PI, 1e-12);
}

TEST(Azimuth, QuadratureOracle) {
    // d(phi)/dt = alpha / g(z(t)) integrated by composite Simpson.
    auto simpson = [](auto f, double a, double b, int n) {
        const double h = (b - a) / n;
        double s = f(a) + f(b);
        for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
        return s * h / 3;
    };
    struct Case {
        SpaceModel m;
        double eps, A, z0;
        int sign;
    };
    for (const Case c : {Case{H, 4, 3, 0, 1}, Case{H, 2, 3, 0, -1}, Case{H, 3, 3, 0.4, 1}, Case{H, 3, 3, 0.4, -1},
                         Case{S, 16, 12, 0, 1}, Case{S, 5, 1, 0, -1}}) {
        auto g = [&](double t) {
            const double w = axial_solution(c.m, c.eps, c.A, t, c.sign, c.z0);
            return c.m == H ? 1.0 / (1.0 + w * w) : 1.0 / (1.0 - w * w);
        };
        for (double t : {0.3, 1.0, 2.5}) {
            const double ref = -1.3 * simpson(g, 0.0, t, 4000);
            EXPECT_NEAR(azimuth_solution(c.m, c.eps, c.A, -1.3, t, c.sign, c.z0), ref, 1e-9)
                << to_string(c.m) << " eps=" << c.eps << " A=" << c.A << " t=" << t;
        }
    }
}

TEST(Axial, SphericalPeriodicity) {
    const double eps = 16, A = 12, T = M_PI / std::sqrt(eps);
    for (double t = 0; t < 3; t += 0.137) {
        const double a = axial_solution(S, eps, A, t, 1, 0), b = axial_solution(S, eps, A, t + T, 1, 0);
        ASSERT_NEAR(b, -a, 1e-9);
        ASSERT_NEAR(axial_solution(S, eps, A, t + 2 * T, 1, 0), a, 1e-9);
        const double step = azimuth_solution(S, eps, A, -4, t + T, 1, 0) - azimuth_solution(S, eps, A, -4, t, 1, 0);
        ASSERT_NEAR(step, -4 * M_PI / std::sqrt(A), 1e-9);
    }
}

TEST(Radial, FixedAndContained) {
    for (double t : {0.0, 1.0, 7.0}) EXPECT_DOUBLE_EQ(radial_solution(H, 2, -1, 3, 4, t, 0.0), 2.0);
    const double ph = radial_phase(H, 2, -1, 3.5, std::acosh(3.0), 1.0);
    for (double t = 0; t < 50; t += 0.25) {
        const double x = radial_solution(H, 2, -1, 3.5, 4, t, ph);
        ASSERT_GE(x, 4 - std::sqrt(7.0) - 1e-12);
        ASSERT_LE(x, 4 + std::sqrt(7.0) + 1e-12);
    }
    EXPECT_EQ(kind_of([] { radial_solution(H, 2, -1, 3.5, 3, 1.0, 0.0); }), ErrorKind::Unsupported);
}

TEST(Radial, MatchesIntegrationInEveryClass) {
    struct Case {
        SpaceModel m;
        double B, I, A, eps, x0;
    };
    for (const Case c : {Case{H, 2, -1, 3.5, 4, 3.0}, Case{H, 1, 0.5, 2, 3, 1.5}, Case{H, 1, 0.5, 1, 2, 1.5},
                         Case{S, 2, -2, 12.5, 16, 0.5}})
        for (int svr : {1, -1}) {
            const CylState s0 = state_at(c.m, c.B, c.I, c.A, c.eps, c.x0, svr, 1);
            const double ph = radial_phase(c.m, c.B, c.I, c.A, s0.point.r, s0.vr);
            const double t_end = 3.0;
            const Trajectory tr = integrate(c.m, c.B, s0, t_end, StepControl::adaptive(1e-12, 1e-14));
            ASSERT_EQ(tr.termination, Termination::Completed) << tr.reason;
            for (const Sample& x : tr.samples) {
                const double xn = c.m == H ? std::cosh(x.state.point.r) : std::cos(x.state.point.r);
                ASSERT_NEAR(radial_solution(c.m, c.B, c.I, c.A, c.eps, x.t, ph), xn, 1e-7 * std::max(1.0, xn))
                    << "B=" << c.B << " I=" << c.I << " A=" << c.A << " t=" << x.t;
            }
        }
}

TEST(Surfaces, RphiHandValues) {
    for (double phi : {0.0, 1.0, 4.0}) {
        EXPECT_NEAR(trajectory_surface_rphi(H, 2, -1, 3, {std::acosh(2.0), phi, 0.3}, 0.0), 0, 1e-14);
        EXPECT_NEAR(trajectory_surface_rphi(S, 2, -2, 12, {M_PI / 3, phi, 0.3}, 0.0), 0, 1e-14);
    }
    EXPECT_GT(std::abs(trajectory_surface_rphi(H, 2, -1, 3.5, {0.4, 1.0, 0.0}, 0.0)), 1e-3);
    EXPECT_EQ(kind_of([] { trajectory_surface_rphi(S, 0, 3, 1, {1, 0, 0}, 0.0); }), ErrorKind::InvalidParams);
}

TEST(Surfaces, AlongIntegratedTrajectories) {
    struct Case {
        SpaceModel m;
        double B, I, A, eps, x0;
    };
    for (const Case c : {Case{H, 2, -1, 3.5, 4, 3.0}, Case{H, 2, -1, 3.5, 3.2, 3.0}, Case{H, 1, 0.5, 2, 3, 2.0},
                         Case{S, 2, -2, 12.5, 16, 0.5}}) {
        // Start off the plane z = 0.
        const double r0 = c.m == H ? std::acosh(c.x0) : std::acos(c.x0);
        const double z0 = c.eps < c.A ? 0.5 : 0.2;
        const CylState s0 = state_from_integrals(c.m, c.B, c.I, c.A, c.eps, r0, z0, 0.7, 1, c.eps < c.A ? -1 : 1);
        const double off = rphi_offset(c.m, c.B, s0);
        const RzAnchor an = rz_anchor(c.m, c.B, s0);
        const Trajectory tr = integrate(c.m, c.B, s0, 20.0, StepControl::adaptive());
        ASSERT_EQ(tr.termination, Termination::Completed);
        AxialBranch br = an.branch;
        double last = s0.vz;
        for (const Sample& x : tr.samples) {
            if (x.state.vz * last < 0) ++br.sheet;
            last = x.state.vz;
            ASSERT_LE(std::abs(trajectory_surface_rphi(c.m, c.B, c.I, c.A, x.state.point, off)), 1e-6);
            const MotionConstants lc = invariants_of(c.m, c.B, x.state);
            ASSERT_LE(std::abs(trajectory_surface_rz(c.m, c.B, lc.i_phi, lc.a_transverse, lc.epsilon, x.state.point, br,
                                                     an.phase)),
                      1e-6)
                << "t=" << x.t;
        }
    }
}

TEST(Surfaces, RzErrors) {
    EXPECT_EQ(kind_of([] { trajectory_surface_rz(H, 2, -1, 3, 4, {1, 0, 0}, {}, 0.0); }), ErrorKind::RegimeMismatch);
    EXPECT_EQ(kind_of([] { axial_phase(H, 3, 4, 0.0, {1, 0}); }), ErrorKind::DomainError);
}

TEST(Canonical, HandValues) {
    CanonicalParams c = canonical_parameters(H, 2, -1, 3);
    EXPECT_EQ(c.j, 1);
    EXPECT_EQ(c.c_par, 0);
    EXPECT_EQ(c.invariant_value, 1);
    c = canonical_parameters(H, 1, 0, 2);
    EXPECT_EQ(c.j, 1);
    EXPECT_NEAR(c.c_par, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(c.invariant_value, -1, 1e-15);
    c = canonical_parameters(S, 2, -2, 12);
    EXPECT_EQ(c.j, 4);
    EXPECT_EQ(c.c_par, 0);
    EXPECT_EQ(c.invariant_value, 16);
    EXPECT_EQ(kind_of([] { canonical_parameters(S, 0, 3, 1); }), ErrorKind::InvalidParams);
}

TEST(Canonical, TransformHandValues) {
    const CanonicalParams c{1.0, 0.0, 1.0};
    const CanonicalParams same = transform_parameters(H, {ShiftPlane::Plane01, 0.0}, c);
    EXPECT_EQ(same.j, c.j);
    EXPECT_EQ(same.c_par, c.c_par);

    const CanonicalParams r = transform_parameters(S, {ShiftPlane::Plane01, M_PI / 2}, {4, 0, 16});
    EXPECT_NEAR(r.j, 0, 1e-14);
    EXPECT_NEAR(r.c_par, -4, 1e-14);
    EXPECT_NEAR(r.invariant_value, 16, 1e-13);

    // The circle cosh r = 2 moved by a boost lies on the transformed surface.
    const double beta = 0.6;
    const CanonicalParams b = transform_parameters(H, {ShiftPlane::Plane01, beta}, {1, 0, 1});
    EXPECT_NEAR(b.j, std::cosh(beta), 1e-15);
    EXPECT_NEAR(b.c_par, std::sinh(beta), 1e-15);
    for (double phi = 0; phi < 6.2; phi += 0.3) {
        const CylPoint q = shift_pullback_cyl(H, {ShiftPlane::Plane01, beta}, {std::acosh(2.0), phi, 0.0});
        EXPECT_NEAR(b.j * std::cosh(q.r) - b.c_par * std::sinh(q.r) * std::cos(q.phi), 2.0, 1e-12);
    }
}

TEST(Canonical, InvariantAndComposition) {
    std::mt19937_64 g(46);
    for (SpaceModel m : {H, S})
        for (int i = 0; i < 10000; ++i) {
            const CanonicalParams c{oracle::uniform(g, -3, 3), oracle::uniform(g, 0, 3), 0};
            const double inv = m == H ? c.j * c.j - c.c_par * c.c_par : c.j * c.j + c.c_par * c.c_par;
            const double b1 = oracle::uniform(g, -1.5, 1.5), b2 = oracle::uniform(g, -1.5, 1.5);
            const CanonicalParams t1 = transform_parameters(m, {ShiftPlane::Plane01, b1}, c);
            const double inv1 = m == H ? t1.j * t1.j - t1.c_par * t1.c_par : t1.j * t1.j + t1.c_par * t1.c_par;
            ASSERT_NEAR(inv1, inv, 1e-12 * std::max(1.0, c.j * c.j + c.c_par * c.c_par) * (m == H ? 20 : 1));
            const CanonicalParams t12 = transform_parameters(m, {ShiftPlane::Plane01, b2}, t1);
            const CanonicalParams t = transform_parameters(m, {ShiftPlane::Plane01, b1 + b2}, c);
            ASSERT_NEAR(t12.j, t.j, 1e-10);
            ASSERT_NEAR(t12.c_par, t.c_par, 1e-10);
        }
}

TEST(Canonical, InvariantFromIntegrals) {
    std::mt19937_64 g(47);
    for (int i = 0; i < 10000; ++i) {
        const double B = oracle::uniform(g, -2, 2), I = oracle::uniform(g, -2, 2), A = oracle::uniform(g, 0, 4);
        try {
            const CanonicalParams h = canonical_parameters(H, B, I, A);
            ASSERT_NEAR(h.invariant_value, B * B - A, 1e-12 * std::max(1.0, A + B * B));
            ASSERT_NEAR(h.j * h.j - h.c_par * h.c_par, B * B - A, 1e-12 * std::max(1.0, h.j * h.j));
        } catch (const Error&) {
        }
        try {
            const CanonicalParams s = canonical_parameters(S, B, I, A);
            ASSERT_NEAR(s.invariant_value, A + B * B, 1e-12 * std::max(1.0, A + B * B));
            ASSERT_NEAR(s.j * s.j + s.c_par * s.c_par, A + B * B, 1e-12 * std::max(1.0, A + B * B));
        } catch (const Error&) {
            ASSERT_LT(A + B * B - (I - B) * (I - B), 0);
        }
    }
}
