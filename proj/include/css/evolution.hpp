/// @file evolution.hpp
/// @brief Strang-split integrator for i u_t + Lap u = A_0 u + (A_theta/r)^2 u - |u|^{p-1} u.
///
/// One step = half nonlinear, full linear, half nonlinear.  The nonlinear
/// substep i u_t = V u with real V = (A_theta/r)^2 + A_0 - |u|^{p-1} keeps |u|
/// pointwise, hence V, so it is solved exactly by u <- u exp(-i V tau).  The
/// linear substep i u_t = -Lap u is Crank-Nicolson with the grid's
/// W-symmetric stiffness K (Lap = -W^{-1} K):
///   (W + i dt/2 K) u^{n+1} = (W - i dt/2 K) u^n,
/// a Cayley transform, unitary in the W inner product: the discrete mass
/// sum W |u|^2 is conserved to rounding and the step is exactly reversible.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "css/cutoff.hpp"
#include "css/functionals.hpp"
#include "css/gauge.hpp"
#include "css/penta_ldlt.hpp"

namespace css {

/// How a propagation ended.
enum class Termination { completed, blowup_detected, boundary_contaminated };

std::string to_string(Termination t);
Termination termination_from_string(const std::string& s);

/// Run parameters.
struct SimConfig {
    double p = 5.0;
    double dt = 1e-3;
    double t_end = 1.0;
    int n = 2048;
    double r_max = 64.0;
    bool nonlinear_on = true;
    double blowup_gradient_factor = 10.0;
    double boundary_mass_tol = 1e-8;
    int log_stride = 1;
    /// Cutoff radius R of the logged virial; 0 selects r_max / 20.
    double virial_radius = 0.0;
    /// Times at which full snapshots of u are kept (multiples of dt).
    std::vector<double> snapshot_times;

    /// Throws ContractViolation with a field-level message.
    void validate() const;
    /// Number of steps t_end / dt.
    long steps() const;
    double effective_virial_radius() const;
};

/// Running space-time integrals of the three Morawetz densities.
struct MorawetzAccumulators {
    double p_norm = 0.0;   ///< int_0^t int |u|^{p+1} dx ds
    double q_charge = 0.0; ///< int_0^t int (A_theta/r)^2 |u|^2 dx ds
    double a_zero = 0.0;   ///< int_0^t int A_0 |u|^2 dx ds
    double total() const { return p_norm + q_charge + a_zero; }
};

/// Diagnostics of one run.  All per-log vectors have equal length.
struct TrajectoryLog {
    std::vector<double> times;
    std::vector<FunctionalReport> reports;
    std::vector<double> grad_norm;
    std::vector<double> sup_norm;
    std::vector<double> virial;
    std::vector<MorawetzAccumulators> morawetz;
    Termination termination = Termination::completed;
    double termination_time = 0.0;  ///< time of the last completed step
    double virial_radius = 0.0;
    double dt = 0.0;
    double p = 0.0;
    std::vector<double> snapshot_times;
    std::vector<RadialField> snapshots;

    std::size_t size() const { return times.size(); }
    /// One row per logged step:
    /// t,M,E,S,K,grad_norm,sup_norm,virial,morawetz_p,morawetz_q,morawetz_a0
    std::string to_csv() const;
};

/// Factorised Crank-Nicolson map of the linear substep for a fixed dt
/// (either sign); complex-symmetric pentadiagonal LDL^T without pivoting,
/// which exists because the Hermitian part W of W + i dt/2 K is positive.
class LinearPropagator {
public:
    LinearPropagator(GridPtr grid, double dt);
    /// u^{n+1} from u^n.
    ComplexSamples apply(const ComplexSamples& u) const;
    double dt() const { return dt_; }
    const GridPtr& grid() const { return grid_; }

private:
    GridPtr grid_;
    double dt_;
    SymmetricPentaLdlt<Complex> factor_;  // W + i dt/2 K
};

/// Exact phase rotation u exp(-i V tau) with V frozen from |u|.
RadialField nonlinear_substep(const RadialField& u, double tau, double p);

/// One Strang step with a prepared linear propagator (dt = lin.dt()).
RadialField step_strang(const RadialField& u, const LinearPropagator& lin, double p);

/// One Strang step (factorises the linear map on every call).
RadialField step_strang(const RadialField& u, double dt, double p);

/// Integrates u0 under cfg with monitors; see Termination for exits.
TrajectoryLog propagate(const RadialField& u0, const SimConfig& cfg);

/// e^{i t Lap} u by |t|/dt Crank-Nicolson steps (t of either sign).
RadialField free_propagate(const RadialField& u, double t, double dt);

/// Number of steps t / dt; ContractViolation unless it is an integer within rounding.
long step_count(double t, double dt);

}  // namespace css
