/// @file cutoff.hpp
/// @brief Quadratic-then-flat cutoff chi_R and the localized virial quantity.
///
/// chi(s) = s^2/2 on [0, 1], constant on [10, inf), and on [1, 10]
/// chi'' = h(tau), tau = (s-1)/9, with
///   h(tau) = 1 - 3 tau^2 + 2 tau^3 - (55/3) tau^2 (1-tau)^2,
/// a smoothstep from 1 to 0 with a quartic bump chosen so that chi'(10) = 0.
/// Since -3 tau^2 + 2 tau^3 <= 0 on [0, 1], chi'' <= 1 everywhere.
/// chi_R(r) = R^2 chi(r/R).
#pragma once

#include "css/radial_core.hpp"

namespace css {

/// chi, chi' and chi'' of the unit cutoff at s >= 0.
double cutoff_chi(double s);
double cutoff_chi_prime(double s);
double cutoff_chi_second(double s);

/// Cutoff sampled on a grid.
struct CutoffProfile {
    double big_r = 0.0;
    RealSamples chi;          ///< chi_R(r_j)
    RealSamples chi_prime;    ///< chi_R'(r_j) = R chi'(r_j/R)
    RealSamples chi_second;   ///< discrete second difference of chi_R at interior nodes
    GridPtr grid;

    /// Builds the profile; R > 0.
    static CutoffProfile create(GridPtr grid, double big_r);
};

/// V = 2 pi Im int conj(u) u_r chi_R'(r) r dr, the radial form of
/// Im int conj(u) (D_1 u d_1 chi_R + D_2 u d_2 chi_R) dx (x . A = 0 for the ansatz).
double virial_value(const RadialField& u, const CutoffProfile& cutoff);

}  // namespace css
