/// @file oracle.hpp
/// @brief Independent reference values for the tests.
///
/// Nothing here touches the library's quadrature or operators: values are
/// closed forms or adaptive Gauss-Legendre integrals of analytic functions.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Composite 10-point Gauss-Legendre rule with @p panels equal panels on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 2000) {
    static const double x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                                0.9739065285171717};
    static const double w[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                                0.0666713443086881};
    const double h = (b - a) / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double mid = a + (k + 0.5) * h, half = 0.5 * h;
        for (int i = 0; i < 5; ++i) acc += w[i] * half * (f(mid - half * x[i]) + f(mid + half * x[i]));
    }
    return acc;
}

/// 2 pi int_0^R f(r) r dr.
inline double plane_integral(const std::function<double(double)>& f, double big_r = 40.0) {
    return 2.0 * pi * integrate([&](double r) { return f(r) * r; }, 0.0, big_r);
}

/// E_1(x) = -Ei(-x).
inline double e1(double x) { return -std::expint(-x); }

/// A_theta of |e^{-r^2/2}|^2 = e^{-r^2}:  -(1 - e^{-r^2}) / 4.
inline double a_theta_gaussian(double r) { return -0.25 * (1.0 - std::exp(-r * r)); }

/// A_0 of e^{-r^2}: int_r^inf (1 - e^{-s^2}) e^{-s^2} / (4 s) ds = (E1(r^2) - E1(2 r^2)) / 8,
/// with the limit ln(2) / 8 at r = 0.
inline double a_zero_gaussian(double r) {
    if (r == 0.0) return std::log(2.0) / 8.0;
    return (e1(r * r) - e1(2.0 * r * r)) / 8.0;
}

/// Gauge charge of e^{-r^2/2}: (pi / 16) ln(4/3).
inline double q_charge_gaussian() { return pi / 16.0 * std::log(4.0 / 3.0); }

/// Free Schroedinger evolution of e^{-r^2/2} under i u_t + Lap u = 0.
inline std::complex<double> free_gaussian(double r, double t) {
    const std::complex<double> z(1.0, 2.0 * t);
    return std::exp(-r * r / (2.0 * z)) / z;
}

/// Mass of the 2-D Townes soliton, -Lap Q + Q = Q^3:  ||Q||_2^2.
inline constexpr double townes_mass = 11.700896;

}  // namespace oracle
