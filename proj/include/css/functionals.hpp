/// @file functionals.hpp
/// @brief Mass, energy, action, Nehari functional, scaling map and gradient.
///
/// With D = ||grad u||^2 + Q (covariant kinetic energy, Q the gauge charge)
/// and N = ||u||_{p+1}^{p+1}:
///   M = ||u||_2^2,  E = D/2 - N/(p+1),  S = E + M/2,
///   K = D - (p-1)/(p+1) N,  L = S - K/2.
/// Under u_lambda(r) = lambda u(lambda r): D -> lambda^2 D, N -> lambda^{p-1} N,
/// M invariant, so K(u_lambda) = 0 at lambda*^{p-3} = (p+1) D / ((p-1) N).
#pragma once

#include <string>

#include "css/gauge.hpp"
#include "css/radial_core.hpp"

namespace css {

/// Functional values of one field for exponent p.
struct FunctionalReport {
    double mass = 0.0;          ///< M
    double energy = 0.0;        ///< E
    double action = 0.0;        ///< S = E + M/2
    double nehari = 0.0;        ///< K
    double l_value = 0.0;       ///< L = S - K/2
    double q_charge = 0.0;      ///< Q = int (A_theta/r)^2 |u|^2 dx
    double grad_kinetic = 0.0;  ///< int |grad u|^2 dx
    double p_norm = 0.0;        ///< int |u|^{p+1} dx
    double p = 0.0;

    /// D = grad_kinetic + q_charge.
    double covariant_kinetic() const { return grad_kinetic + q_charge; }
};

/// Throws ContractViolation unless p > 3.
void require_supercritical(double p);

/// All functionals of u.  Zero field gives all zeros.
FunctionalReport report(const RadialField& u, double p);

/// Same, reusing potentials that were already computed for u.
FunctionalReport report(const RadialField& u, double p, const GaugePotentials& g);

/// lambda * u(lambda r) resampled on the same grid (cubic Lagrange
/// interpolation of the even extension; zero beyond r_max).
RadialField scale_field(const RadialField& u, double lambda);

/// Scaling factor that puts u on the Nehari manifold.  DomainError when
/// p_norm = 0.
double nehari_lambda_star(const FunctionalReport& rep);

/// S(u_lambda) from the scaling laws of the report.
double scaled_action(const FunctionalReport& rep, double lambda);

/// K(u_lambda) from the scaling laws of the report.
double scaled_nehari(const FunctionalReport& rep, double lambda);

/// S(u_{lambda*}), the action after Nehari projection (scale invariant).
double projected_action(const FunctionalReport& rep);

/// First variation S'(u) = -Lap u + u + (A_theta/r)^2 u + A_0 u - |u|^{p-1} u,
/// paired with the grid quadrature: dS[h] = Re sum_j W_j S'_j conj(h_j).
RadialField action_gradient(const RadialField& u, double p);

/// Real coefficient V = (A_theta/r)^2 + A_0 - |u|^{p-1} of the local part.
RealSamples nonlinear_potential(const RadialField& u, double p, const GaugePotentials& g);

/// Flat JSON object with exactly the report's field names.
std::string to_json(const FunctionalReport& rep);

}  // namespace css
