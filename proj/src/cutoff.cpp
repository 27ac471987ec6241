/// @file cutoff.cpp
/// @brief Cutoff chi_R and the localized virial quantity.
#include "css/cutoff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace css {

namespace {

constexpr double kBump = 55.0 / 3.0;

// h(tau) and its first two antiderivatives (vanishing at tau = 0).
double h0(double t) { return 1.0 - 3.0 * t * t + 2.0 * t * t * t - kBump * t * t * (1.0 - t) * (1.0 - t); }
double h1(double t) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    return t - t3 + 0.5 * t4 - kBump * (t3 / 3.0 - 0.5 * t4 + 0.2 * t5);
}
double h2(double t) {
    const double t2 = t * t, t4 = t2 * t2, t5 = t4 * t, t6 = t5 * t;
    return 0.5 * t2 - 0.25 * t4 + 0.1 * t5 - kBump * (t4 / 12.0 - 0.1 * t5 + t6 / 30.0);
}

constexpr double kChiFlat = 0.5 + 9.0 * (1.0 + 9.0 * (0.5 - 0.25 + 0.1 - kBump * (1.0 / 12.0 - 0.1 + 1.0 / 30.0)));

// 4-point Gauss-Legendre rule on [-1, 1]; exact through degree 7.
constexpr std::array<double, 4> kGlX = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                        0.8611363115940526};
constexpr std::array<double, 4> kGlW = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                        0.3478548451374538};

// int_a^b chi''(x / R) (1 - |x - c| / h) dx / h over a piece where both factors are polynomial.
double hat_piece(double a, double b, double c, double h, double big_r) {
    if (!(b > a)) return 0.0;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t q = 0; q < kGlX.size(); ++q) {
        const double x = mid + half * kGlX[q];
        acc += kGlW[q] * cutoff_chi_second(x / big_r) * (1.0 - std::abs(x - c) / h);
    }
    return acc * half / h;
}

}  // namespace

double cutoff_chi(double s) {
    s = std::abs(s);
    if (s <= 1.0) return 0.5 * s * s;
    if (s >= 10.0) return kChiFlat;
    const double t = (s - 1.0) / 9.0;
    return 0.5 + 9.0 * (t + 9.0 * h2(t));
}

double cutoff_chi_prime(double s) {
    const double sign = s < 0.0 ? -1.0 : 1.0;
    s = std::abs(s);
    if (s <= 1.0) return sign * s;
    if (s >= 10.0) return 0.0;
    return sign * (1.0 + 9.0 * h1((s - 1.0) / 9.0));
}

double cutoff_chi_second(double s) {
    s = std::abs(s);
    if (s <= 1.0) return 1.0;
    if (s >= 10.0) return 0.0;
    return h0((s - 1.0) / 9.0);
}

CutoffProfile CutoffProfile::create(GridPtr grid, double big_r) {
    require(grid != nullptr, "CutoffProfile: null grid");
    require(std::isfinite(big_r) && big_r > 0.0, "CutoffProfile: R must be positive");
    CutoffProfile c;
    c.big_r = big_r;
    c.grid = grid;
    const auto n = static_cast<std::size_t>(grid->n());
    const double h = grid->dr();
    c.chi.resize(n);
    c.chi_prime.resize(n);
    c.chi_second.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = grid->nodes()[j];
        c.chi[j] = r <= big_r ? 0.5 * r * r : big_r * big_r * cutoff_chi(r / big_r);
        c.chi_prime[j] = big_r * cutoff_chi_prime(r / big_r);
        // (chi_{j+1} - 2 chi_j + chi_{j-1}) / h^2 equals the hat-weighted mean
        // of chi_R'' over [r_j - h, r_j + h]; evaluating it that way keeps the
        // value a convex combination of chi'' samples, free of cancellation.
        const double lo = r - h, hi = r + h;
        std::array<double, 6> cuts = {lo, r, hi, big_r, -big_r, 10.0 * big_r};
        std::sort(cuts.begin(), cuts.end());
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = std::max(cuts[k], lo), b = std::min(cuts[k + 1], hi);
            acc += hat_piece(a, b, r, h, big_r);
        }
        c.chi_second[j] = acc;
    }
    return c;
}

double virial_value(const RadialField& u, const CutoffProfile& cutoff) {
    require(cutoff.grid && u.grid && cutoff.grid->same_as(*u.grid), "virial_value: grid mismatch");
    u.check_finite();
    const RadialField ur = radial_derivative(u);
    const RealSamples& w = u.grid->weights();
    // W_j approximates 2 pi r dr, so this is 2 pi int Im(conj(u) u_r) chi' r dr.
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
        acc += w[j] * (std::conj(u.values[j]) * ur.values[j]).imag() * cutoff.chi_prime[j];
    return acc;
}

}  // namespace css
