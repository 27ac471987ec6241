/// @file radial_core.hpp
/// @brief Uniform radial grid, quadrature, norms and discrete operators.
///
/// Radial functions on the plane are sampled on r_j = j*dr, j = 0..n-1.
/// Two families of operators live here:
///
///  * the plain second-order stencils (laplacian_radial, radial_derivative)
///    used for pointwise diagnostics;
///  * a fourth-order, summation-by-parts (SBP) discretisation of the radial
///    Laplacian, -W^{-1} K, where W is a diagonal quadrature and K a
///    symmetric positive semidefinite pentadiagonal stiffness matrix.  W is
///    the quadrature used by integrate_radial and every functional, and the
///    pair (W, K) is what makes the time integrator exactly mass conserving.
#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "css/errors.hpp"

namespace css {

using Complex = std::complex<double>;
using RealSamples = std::vector<double>;
using ComplexSamples = std::vector<Complex>;

/// Symmetric pentadiagonal matrix stored by diagonals.
/// d0[j] = M(j,j), d1[j] = M(j,j+1), d2[j] = M(j,j+2).
struct SymmetricPenta {
    RealSamples d0, d1, d2;

    std::size_t size() const { return d0.size(); }
    /// y = M x
    ComplexSamples apply(const ComplexSamples& x) const;
    RealSamples apply(const RealSamples& x) const;
};

/// Uniform mesh on [0, r_max] together with its SBP quadrature weights and
/// stiffness matrix.  Immutable after construction; share through GridPtr.
class RadialGrid {
public:
    /// Smallest node count for which the fourth-order closure is defined.
    static constexpr int kMinNodes = 24;

    /// Builds a grid; throws ContractViolation unless n >= kMinNodes and
    /// r_max > 0 is finite.
    static std::shared_ptr<const RadialGrid> create(int n, double r_max);

    int n() const { return n_; }
    double r_max() const { return r_max_; }
    double dr() const { return dr_; }
    const RealSamples& nodes() const { return r_; }
    double node(int j) const { return r_[static_cast<std::size_t>(j)]; }
    /// Quadrature weights: integrate_radial(f) = sum_j weights[j] f[j].
    const RealSamples& weights() const { return w_; }
    /// Stiffness K: sum |grad u|^2 dx  ~  Re(u^* K u).
    const SymmetricPenta& stiffness() const { return k_; }

    bool same_as(const RadialGrid& other) const {
        return n_ == other.n_ && r_max_ == other.r_max_;
    }

private:
    RadialGrid(int n, double r_max);

    int n_;
    double r_max_;
    double dr_;
    RealSamples r_;
    RealSamples w_;
    SymmetricPenta k_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Complex radial profile u(r_j) on a grid.
struct RadialField {
    GridPtr grid;
    ComplexSamples values;
    std::string label;

    RadialField() = default;
    RadialField(GridPtr g, ComplexSamples v, std::string l = {});

    std::size_t size() const { return values.size(); }
    /// Throws CorruptedState if any sample is NaN/Inf.
    void check_finite() const;
    bool is_zero() const;

    /// Samples a complex function of r on the nodes of @p g.
    static RadialField sample(GridPtr g, const std::function<Complex(double)>& f,
                              std::string label = {});
    /// amplitude * exp(-r^2/(2 width^2)) * exp(i chirp r^2)
    static RadialField gaussian(GridPtr g, double amplitude, double width = 1.0,
                                double chirp = 0.0);
    static RadialField zeros(GridPtr g);
};

/// Sum of weights * f, i.e. 2*pi * int_0^inf f(r) r dr.
double integrate_radial(const RealSamples& f, const RadialGrid& grid);

/// L^q norm of u; q = +infinity gives the sup norm.  q < 1 violates the contract.
double lq_norm(const RadialField& u, double q);

/// Second-order Laplacian u_rr + u_r/r, L'Hopital row 4(u1-u0)/dr^2 at r = 0
/// and a homogeneous Dirichlet ghost beyond r_max.
RadialField laplacian_radial(const RadialField& u);

/// Second-order radial derivative: centred inside, one-sided at both ends.
RadialField radial_derivative(const RadialField& u);

/// sup_r r^{1/2}|u(r)| / ||u||_{H^1}.  Zero field violates the contract.
double strauss_ratio(const RadialField& u);

/// Fourth-order SBP Laplacian -W^{-1} K u.
RadialField laplacian_high_order(const RadialField& u);

/// ||grad u||_2^2 evaluated as Re(u^* K u).
double kinetic_energy(const RadialField& u);

/// ||u||_{H^1} = sqrt(||u||_2^2 + ||grad u||_2^2).
double h1_norm(const RadialField& u);

/// Fraction of the L^2 mass carried by nodes with r > fraction * r_max.
double mass_fraction_beyond(const RadialField& u, double fraction = 0.9);

/// Throws ContractViolation unless both fields live on the same grid.
void require_same_grid(const RadialField& a, const RadialField& b);

namespace detail {

/// Near-origin closure of the SBP operator, designed once on a unit grid.
struct OriginClosure {
    int rows = 0;                 ///< number of modified leading rows
    RealSamples weight_factor;    ///< W_j / dr^2 for j < rows
    /// Modified stiffness entries (row, col, value / 1) with row < rows,
    /// row <= col <= row + 2; entries are dimensionless (independent of dr).
    struct Entry { int row, col; double value; };
    std::vector<Entry> entries;
};

/// Near-origin block of the gauge prefix matrix T (see gauge.hpp).
struct GaugeClosure {
    int block = 0;                         ///< indices 0..block are modified
    std::vector<double> band;              ///< Euler-Maclaurin band t_1..t_m
    std::vector<std::vector<double>> t;    ///< T(j,k) for 0 <= j,k <= block
};

const OriginClosure& origin_closure();
const GaugeClosure& gauge_closure();

/// Stiffness (negated W*Laplacian) of the corrected operator on a grid with
/// unit spacing and the given finite-volume weights; used by the design.
SymmetricPenta unit_corrected_stiffness(int n, const RealSamples& weights);

}  // namespace detail

}  // namespace css
