/// @file ground_state.hpp
/// @brief Ground-state level d = inf{ S(u) : K(u) = 0, u != 0 } by Nehari-projected descent.
///
/// Work is done on the projected action
///   S^(u) := S(u_{lambda*(u)}) = M/2 + C D^a N^b,
///   a = (p-1)/(p-3),  b = -2/(p-3),
///   C = (p-3)/(2(p-1)) ((p+1)/(p-1))^{2/(p-3)},
/// which is invariant under u -> u_lambda, so the Nehari constraint is
/// satisfied in closed form for every iterate.  On the manifold its gradient
/// coincides with S'(u), and it is automatically tangent to the manifold.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "css/functionals.hpp"

namespace css {

/// Tuning of minimize_d.
struct DescentConfig {
    int starts = 3;                  ///< independent multi-start seeds (run in parallel)
    std::uint64_t seed = 1;          ///< RNG seed of the stage-1 simplices
    int gaussians = 3;               ///< Gaussians in the stage-1 family (3..6)
    int simplex_iterations = 400;    ///< Nelder-Mead iteration cap per start
    int max_iterations = 20000;      ///< stage-2 iteration cap
    int stall_window = 50;           ///< convergence window (iterations)
    double stall_tolerance = 1e-10;  ///< relative decrease over the window
    double projection_tolerance = 1e-10;  ///< |K| / D after the final projection
    int fd_check_interval = 100;     ///< finite-difference gradient spot checks
    int history_stride = 10;         ///< keep every k-th iterate for the L cross-check
    double l_overshoot = 1e-4;       ///< lambda = lambda* (1 + l_overshoot) in the L cross-check

    void validate() const;
};

/// Outcome of minimize_d.
struct GroundStateResult {
    double d_value = 0.0;                 ///< S at the projected profile
    RadialField profile;                  ///< real, nonnegative, K ~ 0
    double residual_k = 0.0;              ///< |K(profile)|
    double residual_k_relative = 0.0;     ///< |K| / (grad_kinetic + q_charge)
    double gradient_residual = 0.0;       ///< ||S'(profile)||_W / ||profile||_W
    double d_by_l_characterization = 0.0; ///< inf L over K <= 0 trial set
    int iterations = 0;
    bool converged = false;
    double stage1_value = 0.0;            ///< S^ after the parametric search
    double fd_check_max_error = 0.0;      ///< worst relative finite-difference mismatch
    double p = 0.0;
    std::vector<RadialField> visited;     ///< thinned descent iterates

    /// JSON without the profile and the visited iterates.
    std::string to_json() const;
    /// r,value rows of the profile.
    std::string profile_csv() const;
};

/// Projected action S^ of u (+inf when p_norm = 0).
double projected_action_of(const RadialField& u, double p);

/// Gradient of S^ in the grid inner product (equals S' on the manifold).
RadialField projected_action_gradient(const RadialField& u, double p);

/// u_{lambda*}, repeated until |K| / D < tol (at most 30 rounds).
RadialField project_to_nehari(const RadialField& u, double p, double tol = 1e-10);

/// Two-stage search for d on @p grid.
GroundStateResult minimize_d(double p, const GridPtr& grid, const DescentConfig& cfg = {});

/// inf L over the visited iterates and @p trials, each scaled by
/// lambda*(1 + l_overshoot) so that K < 0.  DomainError if no candidate has K <= 0.
double cross_check_characterizations(const GroundStateResult& result, double p,
                                     const std::vector<RadialField>& trials = {}, double l_overshoot = 1e-4);

}  // namespace css
