//! Explicit Runge-Kutta steppers: classical RK4 and the Dormand-Prince 5(4)
//! embedded pair with its continuous extension.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace curvedmag::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double h, const Vec<N>& k) {
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
    return out;
}

//! One classical fourth-order step. f(t, y) -> dy/dt.
template <std::size_t N, class F>
Vec<N> rk4_step(F&& f, double t, const Vec<N>& y, double h) {
    const Vec<N> k1 = f(t, y);
    const Vec<N> k2 = f(t + h / 2, axpy(y, h / 2, k1));
    const Vec<N> k3 = f(t + h / 2, axpy(y, h / 2, k2));
    const Vec<N> k4 = f(t + h, axpy(y, h, k3));
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

//! Result of one Dormand-Prince attempt, with data for dense output.
template <std::size_t N>
struct Dopri5Step {
    double t0 = 0;
    double h = 0;
    Vec<N> y0{};
    Vec<N> y1{};
    Vec<N> err{};
    Vec<N> k1{};  // f(t0, y0)
    Vec<N> k7{};  // f(t0 + h, y1), reusable as the next k1
    std::array<Vec<N>, 5> cont{};

    //! Fourth-order interpolant on [t0, t0 + h].
    Vec<N> dense(double t) const {
        const double th = (t - t0) / h, th1 = 1.0 - th;
        Vec<N> out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = cont[0][i] +
                     th * (cont[1][i] + th1 * (cont[2][i] + th * (cont[3][i] + th1 * cont[4][i])));
        return out;
    }
};

template <std::size_t N, class F>
Dopri5Step<N> dopri5_step(F&& f, double t, const Vec<N>& y, const Vec<N>& k1, double h) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    Dopri5Step<N> s;
    s.t0 = t;
    s.h = h;
    s.y0 = y;
    s.k1 = k1;
    Vec<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    const Vec<N> k2 = f(t + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const Vec<N> k3 = f(t + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const Vec<N> k4 = f(t + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const Vec<N> k5 = f(t + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const Vec<N> k6 = f(t + h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        s.y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    s.k7 = f(t + h, s.y1);
    for (std::size_t i = 0; i < N; ++i) {
        s.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                        e7 * s.k7[i]);
        const double ydiff = s.y1[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        s.cont[0][i] = y[i];
        s.cont[1][i] = ydiff;
        s.cont[2][i] = bspl;
        s.cont[3][i] = ydiff - h * s.k7[i] - bspl;
        s.cont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                            d7 * s.k7[i]);
    }
    return s;
}

//! RMS error norm scaled by atol + rtol * max(|y0|, |y1|).
template <std::size_t N>
double error_norm(const Dopri5Step<N>& s, double rtol, double atol) {
    double acc = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = atol + rtol * std::max(std::abs(s.y0[i]), std::abs(s.y1[i]));
        const double q = s.err[i] / sc;
        acc += q * q;
    }
    return std::sqrt(acc / N);
}

//! Step-size factor for an error estimate of a fifth-order pair.
inline double step_factor(double err, bool after_reject) {
    constexpr double safety = 0.9, fmin = 0.2, fmax = 5.0;
    if (err == 0) return after_reject ? 1.0 : fmax;
    const double fac = safety * std::pow(err, -0.2);
    return std::clamp(fac, fmin, after_reject ? 1.0 : fmax);
}

}  // namespace curvedmag::ode
