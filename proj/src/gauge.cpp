/// @file gauge.cpp
/// @brief Prefix/suffix evaluation of the gauge potentials in O(n).
#include "css/gauge.hpp"

#include <cmath>
#include <numbers>

namespace css {

namespace detail {

namespace {

/// Entry of the pure band matrix (without the origin block).
double plain_entry(const std::vector<double>& band, int j, int k) {
    if (j == k) return 0.5;
    const int off = k - j;
    const int bw = static_cast<int>(band.size());
    if (off > 0) return off <= bw ? band[static_cast<std::size_t>(off - 1)] : 0.0;
    return -off <= bw ? 1.0 - band[static_cast<std::size_t>(-off - 1)] : 1.0;
}

}  // namespace

RealSamples gauge_prefix(const RealSamples& x) {
    const GaugeClosure& gc = gauge_closure();
    const int n = static_cast<int>(x.size());
    const int bw = static_cast<int>(gc.band.size());
    RealSamples y(x.size());
    double below = 0.0;  // sum_{i<j} x_i
    for (int j = 0; j < n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        double acc = below + 0.5 * x[jj];
        for (int m = 1; m <= bw; ++m) {
            const double t = gc.band[static_cast<std::size_t>(m - 1)];
            if (j + m < n) acc += t * x[jj + static_cast<std::size_t>(m)];
            if (j - m >= 0) acc -= t * x[jj - static_cast<std::size_t>(m)];
        }
        y[jj] = acc;
        below += x[jj];
    }
    const int nb = std::min(gc.block, n - 1);
    for (int j = 0; j <= nb; ++j)
        for (int k = 0; k <= nb; ++k)
            y[static_cast<std::size_t>(j)] +=
                (gc.t[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] - plain_entry(gc.band, j, k)) *
                x[static_cast<std::size_t>(k)];
    return y;
}

RealSamples gauge_suffix(const RealSamples& x) {
    const GaugeClosure& gc = gauge_closure();
    const int n = static_cast<int>(x.size());
    const int bw = static_cast<int>(gc.band.size());
    RealSamples y(x.size());
    double above = 0.0;  // sum_{j>k} x_j
    for (int k = n - 1; k >= 0; --k) {
        const auto kk = static_cast<std::size_t>(k);
        double acc = above + 0.5 * x[kk];
        for (int m = 1; m <= bw; ++m) {
            const double t = gc.band[static_cast<std::size_t>(m - 1)];
            if (k - m >= 0) acc += t * x[kk - static_cast<std::size_t>(m)];
            if (k + m < n) acc -= t * x[kk + static_cast<std::size_t>(m)];
        }
        y[kk] = acc;
        above += x[kk];
    }
    const int nb = std::min(gc.block, n - 1);
    for (int k = 0; k <= nb; ++k)
        for (int j = 0; j <= nb; ++j)
            y[static_cast<std::size_t>(k)] +=
                (gc.t[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] - plain_entry(gc.band, j, k)) *
                x[static_cast<std::size_t>(j)];
    return y;
}

}  // namespace detail

namespace {

void check_density(const RealSamples& density, const RadialGrid& grid, const char* who) {
    require(density.size() == static_cast<std::size_t>(grid.n()), std::string(who) + ": length mismatch");
    for (double f : density) {
        if (!std::isfinite(f)) throw CorruptedState(std::string(who) + ": non-finite density");
        require(f >= 0.0, std::string(who) + ": negative density entry");
    }
}

}  // namespace

RealSamples density_of(const RadialField& u) {
    RealSamples f(u.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::norm(u.values[j]);
    return f;
}

RealSamples a_theta_of(const RealSamples& density, const RadialGrid& grid) {
    check_density(density, grid, "a_theta_of");
    const RealSamples& w = grid.weights();
    RealSamples g(density.size());
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = w[j] * density[j];
    RealSamples a = detail::gauge_prefix(g);
    const double scale = -1.0 / (4.0 * std::numbers::pi);
    for (double& v : a) v *= scale;
    a[0] = 0.0;  // empty disc
    return a;
}

RealSamples a_zero_of(const RealSamples& density, const RealSamples& a_theta, const RadialGrid& grid) {
    check_density(density, grid, "a_zero_of");
    require(a_theta.size() == density.size(), "a_zero_of: inconsistent lengths");
    const RealSamples& w = grid.weights();
    const RealSamples& r = grid.nodes();
    // H_j = W_j f_j a_j / r_j^2; node 0 carries no charge (a/r -> 0 there).
    RealSamples h(density.size(), 0.0);
    for (std::size_t j = 1; j < h.size(); ++j) h[j] = w[j] * density[j] * a_theta[j] / (r[j] * r[j]);
    RealSamples s = detail::gauge_suffix(h);
    RealSamples a0(density.size());
    for (std::size_t k = 0; k < a0.size(); ++k) a0[k] = -s[k] / (2.0 * std::numbers::pi);
    return a0;
}

GaugePotentials gauge_from_field(const RadialField& u) {
    u.check_finite();
    const RealSamples f = density_of(u);
    GaugePotentials g;
    g.a_theta = a_theta_of(f, *u.grid);
    g.a_theta_over_r.assign(f.size(), 0.0);
    for (std::size_t j = 1; j < f.size(); ++j) g.a_theta_over_r[j] = g.a_theta[j] / u.grid->nodes()[j];
    g.a_zero = a_zero_of(f, g.a_theta, *u.grid);
    return g;
}

double gauge_charge(const RadialField& u, const GaugePotentials& g) {
    const RealSamples& w = u.grid->weights();
    double q = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) q += w[j] * g.a_theta_over_r[j] * g.a_theta_over_r[j] * std::norm(u.values[j]);
    return q;
}

}  // namespace css
