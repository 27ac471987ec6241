/// @file evolution.cpp
/// @brief Strang splitting, Crank-Nicolson linear map and the monitored run loop.
#include "css/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace css {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::completed: return "completed";
        case Termination::blowup_detected: return "blowup_detected";
        case Termination::boundary_contaminated: return "boundary_contaminated";
    }
    return "completed";
}

Termination termination_from_string(const std::string& s) {
    if (s == "completed") return Termination::completed;
    if (s == "blowup_detected") return Termination::blowup_detected;
    if (s == "boundary_contaminated") return Termination::boundary_contaminated;
    throw UsageError("unknown termination '" + s + "'");
}

long step_count(double t, double dt) {
    require(std::isfinite(t) && std::isfinite(dt) && dt != 0.0, "step count: t and dt must be finite, dt != 0");
    const double ratio = t / dt;
    const double steps = std::round(ratio);
    require(std::abs(ratio - steps) <= 1e-9 * std::max(1.0, std::abs(ratio)),
            "t / dt must be an integer within rounding");
    return static_cast<long>(steps);
}

// ---------------------------------------------------------------------------
// SimConfig
// ---------------------------------------------------------------------------

void SimConfig::validate() const {
    require(std::isfinite(p) && p > 3.0, "config.p: must satisfy p > 3");
    require(std::isfinite(dt) && dt > 0.0, "config.dt: must be positive");
    require(dt <= 0.01 * (1.0 + 1e-12), "config.dt: must be <= 0.01 (accuracy guard)");
    require(std::isfinite(t_end) && t_end > 0.0, "config.t_end: must be positive");
    require(n >= RadialGrid::kMinNodes, "config.n: must be >= " + std::to_string(RadialGrid::kMinNodes));
    require(std::isfinite(r_max) && r_max > 0.0, "config.r_max: must be positive");
    require(std::isfinite(blowup_gradient_factor) && blowup_gradient_factor > 1.0,
            "config.blowup_gradient_factor: must be > 1");
    require(std::isfinite(boundary_mass_tol) && boundary_mass_tol > 0.0, "config.boundary_mass_tol: must be positive");
    require(log_stride >= 1, "config.log_stride: must be >= 1");
    require(std::isfinite(virial_radius) && virial_radius >= 0.0, "config.virial_radius: must be >= 0");
    (void)steps();
    for (double ts : snapshot_times) {
        require(ts >= 0.0 && ts <= t_end * (1.0 + 1e-12), "config.snapshot_times: entries must lie in [0, t_end]");
        (void)step_count(ts, dt);
    }
}

long SimConfig::steps() const { return step_count(t_end, dt); }

double SimConfig::effective_virial_radius() const { return virial_radius > 0.0 ? virial_radius : r_max / 20.0; }

// ---------------------------------------------------------------------------
// TrajectoryLog
// ---------------------------------------------------------------------------

std::string TrajectoryLog::to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "t,M,E,S,K,grad_norm,sup_norm,virial,morawetz_p,morawetz_q,morawetz_a0\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        const FunctionalReport& r = reports[i];
        os << times[i] << ',' << r.mass << ',' << r.energy << ',' << r.action << ',' << r.nehari << ','
           << grad_norm[i] << ',' << sup_norm[i] << ',' << virial[i] << ',' << morawetz[i].p_norm << ','
           << morawetz[i].q_charge << ',' << morawetz[i].a_zero << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// LinearPropagator
// ---------------------------------------------------------------------------

LinearPropagator::LinearPropagator(GridPtr grid, double dt) : grid_(std::move(grid)), dt_(dt) {
    require(grid_ != nullptr, "LinearPropagator: null grid");
    require(std::isfinite(dt) && dt != 0.0, "LinearPropagator: dt must be finite and nonzero");
    factor_ = SymmetricPentaLdlt<Complex>(grid_->weights(), grid_->stiffness(), Complex(0.0, 0.5 * dt));
}

ComplexSamples LinearPropagator::apply(const ComplexSamples& u) const {
    require(u.size() == factor_.size(), "LinearPropagator::apply: length mismatch");
    const RealSamples& w = grid_->weights();
    // A x = (2W - A) u  with A = W + i dt/2 K  =>  x = A^{-1}(2 W u) - u.
    ComplexSamples y(u.size());
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = 2.0 * w[j] * u[j];
    factor_.solve_in_place(y);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] -= u[j];
    return y;
}

// ---------------------------------------------------------------------------
// Steps
// ---------------------------------------------------------------------------

namespace {

void rotate_phase(ComplexSamples& u, const RealSamples& v, double tau) {
    for (std::size_t j = 0; j < u.size(); ++j) u[j] *= std::polar(1.0, -v[j] * tau);
}

MorawetzAccumulators densities(const RadialField& u, const GaugePotentials& g, double p) {
    const RealSamples& w = u.grid->weights();
    MorawetzAccumulators d;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double a2 = std::norm(u.values[j]);
        d.p_norm += w[j] * std::pow(a2, 0.5 * (p + 1.0));
        d.q_charge += w[j] * g.a_theta_over_r[j] * g.a_theta_over_r[j] * a2;
        d.a_zero += w[j] * g.a_zero[j] * a2;
    }
    return d;
}

bool all_finite(const ComplexSamples& v) {
    return std::all_of(v.begin(), v.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace

RadialField nonlinear_substep(const RadialField& u, double tau, double p) {
    require_supercritical(p);
    u.check_finite();
    const GaugePotentials g = gauge_from_field(u);
    RadialField out = u;
    rotate_phase(out.values, nonlinear_potential(u, p, g), tau);
    return out;
}

RadialField step_strang(const RadialField& u, const LinearPropagator& lin, double p) {
    require(u.grid && u.grid->same_as(*lin.grid()), "step_strang: grid mismatch");
    RadialField half = nonlinear_substep(u, 0.5 * lin.dt(), p);
    half.values = lin.apply(half.values);
    if (!all_finite(half.values)) throw CorruptedState("step_strang: non-finite value after linear substep");
    return nonlinear_substep(half, 0.5 * lin.dt(), p);
}

RadialField step_strang(const RadialField& u, double dt, double p) {
    require(u.grid != nullptr, "step_strang: null grid");
    return step_strang(u, LinearPropagator(u.grid, dt), p);
}

RadialField free_propagate(const RadialField& u, double t, double dt) {
    require(u.grid != nullptr, "free_propagate: null grid");
    require(std::isfinite(dt) && dt > 0.0, "free_propagate: dt must be positive");
    u.check_finite();
    const long steps = step_count(std::abs(t), dt);
    RadialField out = u;
    if (steps == 0) return out;
    const LinearPropagator lin(u.grid, t < 0.0 ? -dt : dt);
    for (long k = 0; k < steps; ++k) out.values = lin.apply(out.values);
    return out;
}

TrajectoryLog propagate(const RadialField& u0, const SimConfig& cfg) {
    cfg.validate();
    require(u0.grid && u0.grid->n() == cfg.n && u0.grid->r_max() == cfg.r_max,
            "propagate: initial field does not live on the configured grid");
    u0.check_finite();

    const GridPtr grid = u0.grid;
    const double p = cfg.p;
    const long n_steps = cfg.steps();
    const LinearPropagator lin(grid, cfg.dt);
    const CutoffProfile cutoff = CutoffProfile::create(grid, cfg.effective_virial_radius());

    std::vector<long> snap_steps;
    for (double ts : cfg.snapshot_times) snap_steps.push_back(step_count(ts, cfg.dt));

    TrajectoryLog log;
    log.virial_radius = cutoff.big_r;
    log.dt = cfg.dt;
    log.p = p;

    RadialField u = u0;
    GaugePotentials g = gauge_from_field(u);
    MorawetzAccumulators acc;
    MorawetzAccumulators dens = densities(u, g, p);
    const double grad0 = std::sqrt(std::max(0.0, kinetic_energy(u)));
    double t = 0.0;

    auto record = [&](double time, double grad) {
        log.times.push_back(time);
        log.reports.push_back(report(u, p, g));
        log.grad_norm.push_back(grad);
        log.sup_norm.push_back(lq_norm(u, std::numeric_limits<double>::infinity()));
        log.virial.push_back(virial_value(u, cutoff));
        log.morawetz.push_back(acc);
    };
    auto snapshot = [&](long k) {
        for (std::size_t i = 0; i < snap_steps.size(); ++i)
            if (snap_steps[i] == k) {
                log.snapshot_times.push_back(cfg.snapshot_times[i]);
                log.snapshots.push_back(u);
            }
    };

    record(0.0, grad0);
    snapshot(0);
    for (long k = 1; k <= n_steps; ++k) {
        if (cfg.nonlinear_on) {
            rotate_phase(u.values, nonlinear_potential(u, p, g), 0.5 * cfg.dt);
            u.values = lin.apply(u.values);
            if (!all_finite(u.values)) {
                log.termination = Termination::blowup_detected;
                log.termination_time = k * cfg.dt;
                return log;
            }
            // |u| is unchanged by the final half step, so these potentials
            // serve both that half step and the first half of the next step.
            g = gauge_from_field(u);
            rotate_phase(u.values, nonlinear_potential(u, p, g), 0.5 * cfg.dt);
        } else {
            u.values = lin.apply(u.values);
            if (!all_finite(u.values)) {
                log.termination = Termination::blowup_detected;
                log.termination_time = k * cfg.dt;
                return log;
            }
            g = gauge_from_field(u);
        }
        t = static_cast<double>(k) * cfg.dt;

        const MorawetzAccumulators next = densities(u, g, p);
        acc.p_norm += 0.5 * cfg.dt * (dens.p_norm + next.p_norm);
        acc.q_charge += 0.5 * cfg.dt * (dens.q_charge + next.q_charge);
        acc.a_zero += 0.5 * cfg.dt * (dens.a_zero + next.a_zero);
        dens = next;

        const double grad = std::sqrt(std::max(0.0, kinetic_energy(u)));
        snapshot(k);
        if (!std::isfinite(grad) || grad > cfg.blowup_gradient_factor * grad0) {
            log.termination = Termination::blowup_detected;
            log.termination_time = t;
            record(t, grad);
            return log;
        }
        if (mass_fraction_beyond(u, 0.9) > cfg.boundary_mass_tol) {
            log.termination = Termination::boundary_contaminated;
            log.termination_time = t;
            record(t, grad);
            return log;
        }
        if (k % cfg.log_stride == 0 || k == n_steps) record(t, grad);
    }
    log.termination = Termination::completed;
    log.termination_time = t;
    return log;
}

}  // namespace css
