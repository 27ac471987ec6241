/// @file gauge.hpp
/// @brief Nonlocal gauge potentials A_theta, A_theta/r and A_0 of a radial field.
///
///   A_theta(f)(r) = -1/2 int_0^r f(rho) rho d rho = -(1/4 pi) int_{|x|<r} f dx
///   A_0(f)(r)     = -int_r^inf (A_theta(f)/rho) f(rho) d rho
///
/// Discretisation.  With G_j = W_j f_j (W the grid quadrature), the prefix
/// integral is (T G)_j where T = 1/2 I + strictly-lower ones + an
/// antisymmetric Euler-Maclaurin band (plus a designed block at r = 0), so
/// that T + T^T is the all-ones matrix.  A_0 uses T^T, the exact adjoint:
/// it is the variational derivative of the discrete gauge charge
/// Q_h = sum_j W_j (a_j/r_j)^2 f_j, which is why sum W A_0 f = 2 Q_h holds to
/// rounding and the discrete flow conserves its energy.
#pragma once

#include "css/radial_core.hpp"

namespace css {

/// Sampled potentials attached to one field.
struct GaugePotentials {
    RealSamples a_theta;          ///< A_theta(|u|^2)(r_j), exactly 0 at node 0
    RealSamples a_theta_over_r;   ///< A_theta/r, limit value 0 at node 0
    RealSamples a_zero;           ///< A_0(|u|^2)(r_j)
};

/// Prefix potential of a nonnegative density.
RealSamples a_theta_of(const RealSamples& density, const RadialGrid& grid);

/// Suffix potential; @p a_theta must come from a_theta_of(density).
RealSamples a_zero_of(const RealSamples& density, const RealSamples& a_theta, const RadialGrid& grid);

/// All potentials of |u|^2.
GaugePotentials gauge_from_field(const RadialField& u);

/// Gauge charge Q = int (A_theta/r)^2 |u|^2 dx for already computed potentials.
double gauge_charge(const RadialField& u, const GaugePotentials& g);

/// |u|^2 sampled on the nodes.
RealSamples density_of(const RadialField& u);

namespace detail {
/// y = T x  (prefix sums with the designed closure); exposed for tests.
RealSamples gauge_prefix(const RealSamples& x);
/// y = T^T x (suffix sums).
RealSamples gauge_suffix(const RealSamples& x);
}  // namespace detail

}  // namespace css
