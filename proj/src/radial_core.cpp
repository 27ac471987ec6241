/// @file radial_core.cpp
/// @brief Radial grid, SBP quadrature/stiffness, norms and stencils.
#include "css/radial_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace css {

namespace {

template <typename T>
std::vector<T> penta_apply(const SymmetricPenta& m, const std::vector<T>& x) {
    const std::size_t n = m.size();
    require(x.size() == n, "SymmetricPenta::apply: length mismatch");
    std::vector<T> y(n, T{});
    for (std::size_t j = 0; j < n; ++j) {
        T acc = m.d0[j] * x[j];
        if (j + 1 < n) acc += m.d1[j] * x[j + 1];
        if (j + 2 < n) acc += m.d2[j] * x[j + 2];
        if (j >= 1) acc += m.d1[j - 1] * x[j - 1];
        if (j >= 2) acc += m.d2[j - 2] * x[j - 2];
        y[j] = acc;
    }
    return y;
}

}  // namespace

ComplexSamples SymmetricPenta::apply(const ComplexSamples& x) const { return penta_apply(*this, x); }
RealSamples SymmetricPenta::apply(const RealSamples& x) const { return penta_apply(*this, x); }

// ---------------------------------------------------------------------------
// RadialGrid
// ---------------------------------------------------------------------------

std::shared_ptr<const RadialGrid> RadialGrid::create(int n, double r_max) {
    if (n < kMinNodes) {
        std::ostringstream msg;
        msg << "RadialGrid: n must be >= " << kMinNodes << " (got " << n << ")";
        throw ContractViolation(msg.str());
    }
    require(std::isfinite(r_max) && r_max > 0.0, "RadialGrid: r_max must be positive and finite");
    return std::shared_ptr<const RadialGrid>(new RadialGrid(n, r_max));
}

RadialGrid::RadialGrid(int n, double r_max) : n_(n), r_max_(r_max), dr_(r_max / (n - 1)) {
    const auto nn = static_cast<std::size_t>(n);
    r_.resize(nn);
    for (std::size_t j = 0; j < nn; ++j) r_[j] = static_cast<double>(j) * dr_;
    r_[nn - 1] = r_max;

    // Dimensionless finite-volume weights, then the near-origin closure.
    RealSamples w_unit(nn);
    w_unit[0] = std::numbers::pi / 4.0;
    for (std::size_t j = 1; j < nn; ++j) w_unit[j] = 2.0 * std::numbers::pi * static_cast<double>(j);
    k_ = detail::unit_corrected_stiffness(n, w_unit);

    const detail::OriginClosure& oc = detail::origin_closure();
    for (int j = 0; j < oc.rows; ++j) w_unit[static_cast<std::size_t>(j)] = oc.weight_factor[static_cast<std::size_t>(j)];
    for (const auto& e : oc.entries) {
        const auto row = static_cast<std::size_t>(e.row);
        if (e.col == e.row) k_.d0[row] = e.value;
        else if (e.col == e.row + 1) k_.d1[row] = e.value;
        else k_.d2[row] = e.value;
    }
    // The stiffness is dimensionless (scale-free); W scales with dr^2.
    w_.resize(nn);
    const double h2 = dr_ * dr_;
    for (std::size_t j = 0; j < nn; ++j) w_[j] = w_unit[j] * h2;
}

// ---------------------------------------------------------------------------
// RadialField
// ---------------------------------------------------------------------------

RadialField::RadialField(GridPtr g, ComplexSamples v, std::string l)
    : grid(std::move(g)), values(std::move(v)), label(std::move(l)) {
    require(grid != nullptr, "RadialField: null grid");
    require(values.size() == static_cast<std::size_t>(grid->n()),
            "RadialField: values length must equal grid.n");
}

void RadialField::check_finite() const {
    for (const Complex& z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw CorruptedState("RadialField: non-finite sample");
}

bool RadialField::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](const Complex& z) { return z == Complex{}; });
}

RadialField RadialField::sample(GridPtr g, const std::function<Complex(double)>& f, std::string label) {
    require(g != nullptr, "RadialField::sample: null grid");
    ComplexSamples v(static_cast<std::size_t>(g->n()));
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(g->nodes()[j]);
    return RadialField(std::move(g), std::move(v), std::move(label));
}

RadialField RadialField::gaussian(GridPtr g, double amplitude, double width, double chirp) {
    require(width > 0.0, "RadialField::gaussian: width must be positive");
    return sample(std::move(g), [=](double r) {
        return amplitude * std::exp(Complex(-r * r / (2.0 * width * width), chirp * r * r));
    });
}

RadialField RadialField::zeros(GridPtr g) {
    require(g != nullptr, "RadialField::zeros: null grid");
    const auto n = static_cast<std::size_t>(g->n());
    return RadialField(std::move(g), ComplexSamples(n));
}

void require_same_grid(const RadialField& a, const RadialField& b) {
    require(a.grid && b.grid && a.grid->same_as(*b.grid), "fields live on different grids");
}

// ---------------------------------------------------------------------------
// Quadrature and norms
// ---------------------------------------------------------------------------

double integrate_radial(const RealSamples& f, const RadialGrid& grid) {
    require(f.size() == static_cast<std::size_t>(grid.n()), "integrate_radial: length mismatch");
    const RealSamples& w = grid.weights();
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (!std::isfinite(f[j])) throw CorruptedState("integrate_radial: non-finite sample");
        acc += w[j] * f[j];
    }
    return acc;
}

double lq_norm(const RadialField& u, double q) {
    require(!(q < 1.0), "lq_norm: q must be >= 1");
    u.check_finite();
    if (std::isinf(q)) {
        double sup = 0.0;
        for (const Complex& z : u.values) sup = std::max(sup, std::abs(z));
        return sup;
    }
    RealSamples f(u.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::pow(std::abs(u.values[j]), q);
    return std::pow(std::max(0.0, integrate_radial(f, *u.grid)), 1.0 / q);
}

// ---------------------------------------------------------------------------
// Stencils
// ---------------------------------------------------------------------------

RadialField laplacian_radial(const RadialField& u) {
    const int n = u.grid->n();
    require(n >= 3, "laplacian_radial: n must be >= 3");
    const double h = u.grid->dr();
    const ComplexSamples& v = u.values;
    ComplexSamples out(v.size());
    out[0] = 4.0 * (v[1] - v[0]) / (h * h);
    for (int j = 1; j < n; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const Complex right = j + 1 < n ? v[jj + 1] : Complex{};  // Dirichlet ghost
        const double r = u.grid->node(j);
        out[jj] = (right - 2.0 * v[jj] + v[jj - 1]) / (h * h) + (right - v[jj - 1]) / (2.0 * h * r);
    }
    return RadialField(u.grid, std::move(out), u.label);
}

RadialField radial_derivative(const RadialField& u) {
    const int n = u.grid->n();
    require(n >= 3, "radial_derivative: n must be >= 3");
    const double h = u.grid->dr();
    const ComplexSamples& v = u.values;
    const auto last = static_cast<std::size_t>(n - 1);
    ComplexSamples out(v.size());
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for (std::size_t j = 1; j < last; ++j) out[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
    out[last] = (3.0 * v[last] - 4.0 * v[last - 1] + v[last - 2]) / (2.0 * h);
    return RadialField(u.grid, std::move(out), u.label);
}

RadialField laplacian_high_order(const RadialField& u) {
    ComplexSamples ku = u.grid->stiffness().apply(u.values);
    const RealSamples& w = u.grid->weights();
    for (std::size_t j = 0; j < ku.size(); ++j) ku[j] = -ku[j] / w[j];
    return RadialField(u.grid, std::move(ku), u.label);
}

double kinetic_energy(const RadialField& u) {
    const ComplexSamples ku = u.grid->stiffness().apply(u.values);
    double acc = 0.0;
    for (std::size_t j = 0; j < ku.size(); ++j) acc += (std::conj(u.values[j]) * ku[j]).real();
    return acc;
}

double h1_norm(const RadialField& u) {
    const double m = lq_norm(u, 2.0);
    return std::sqrt(m * m + std::max(0.0, kinetic_energy(u)));
}

double strauss_ratio(const RadialField& u) {
    u.check_finite();
    require(!u.is_zero(), "strauss_ratio: zero field");
    double sup = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j)
        sup = std::max(sup, std::sqrt(u.grid->nodes()[j]) * std::abs(u.values[j]));
    return sup / h1_norm(u);
}

double mass_fraction_beyond(const RadialField& u, double fraction) {
    const RealSamples& w = u.grid->weights();
    const double cut = fraction * u.grid->r_max();
    double outer = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double m = w[j] * std::norm(u.values[j]);
        total += m;
        if (u.grid->nodes()[j] > cut) outer += m;
    }
    return total > 0.0 ? outer / total : 0.0;
}

}  // namespace css
