/// @file ground_state.cpp
/// @brief Parametric Nelder-Mead start followed by preconditioned projected descent.
#include "css/ground_state.hpp"

#include "css/penta_ldlt.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace css {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// (W + K)^{-1} W, the H^1 preconditioner.
class H1Preconditioner {
public:
    explicit H1Preconditioner(const RadialGrid& grid)
        : w_(grid.weights()), factor_(grid.weights(), grid.stiffness(), 1.0) {}

    ComplexSamples apply(const ComplexSamples& g) const {
        ComplexSamples y(g.size());
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = w_[j] * g[j];
        factor_.solve_in_place(y);
        return y;
    }

private:
    RealSamples w_;
    SymmetricPentaLdlt<double> factor_;
};

struct Coefficients {
    double a, b, c;
};

Coefficients projected_coefficients(double p) {
    Coefficients k{};
    k.a = (p - 1.0) / (p - 3.0);
    k.b = -2.0 / (p - 3.0);
    k.c = (p - 3.0) / (2.0 * (p - 1.0)) * std::pow((p + 1.0) / (p - 1.0), 2.0 / (p - 3.0));
    return k;
}

double projected_from_report(const FunctionalReport& rep) {
    if (!(rep.p_norm > 0.0) || !(rep.covariant_kinetic() > 0.0)) return kInf;
    const Coefficients k = projected_coefficients(rep.p);
    return 0.5 * rep.mass + k.c * std::pow(rep.covariant_kinetic(), k.a) * std::pow(rep.p_norm, k.b);
}

double inner_w(const ComplexSamples& x, const ComplexSamples& y, const RealSamples& w) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += w[j] * (std::conj(x[j]) * y[j]).real();
    return acc;
}

RadialField gaussian_sum(const GridPtr& grid, const std::vector<double>& params) {
    const std::size_t m = params.size() / 2;
    return RadialField::sample(grid, [&](double r) {
        double v = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double amp = std::exp(params[2 * i]), width = std::exp(params[2 * i + 1]);
            v += amp * std::exp(-r * r / (2.0 * width * width));
        }
        return Complex(v, 0.0);
    });
}

/// Plain Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                double step, int iterations) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step;
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) fv[i] = f(simplex[i]);
    std::vector<std::size_t> order(dim + 1);
    for (int it = 0; it < iterations; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t v = 0; v <= dim; ++v)
                if (v != worst) centroid[i] += simplex[v][i] / static_cast<double>(dim);
        auto along = [&](double t) {
            std::vector<double> x(dim);
            for (std::size_t i = 0; i < dim; ++i) x[i] = centroid[i] + t * (simplex[worst][i] - centroid[i]);
            return x;
        };
        const std::vector<double> xr = along(-1.0);
        const double fr = f(xr);
        if (fr < fv[best]) {
            const std::vector<double> xe = along(-2.0);
            const double fe = f(xe);
            if (fe < fr) { simplex[worst] = xe; fv[worst] = fe; }
            else { simplex[worst] = xr; fv[worst] = fr; }
        } else if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            const std::vector<double> xc = fr < fv[worst] ? along(-0.5) : along(0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t v = 0; v <= dim; ++v) {
                    if (v == best) continue;
                    for (std::size_t i = 0; i < dim; ++i) simplex[v][i] = 0.5 * (simplex[v][i] + simplex[best][i]);
                    fv[v] = f(simplex[v]);
                }
            }
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    return simplex[best];
}

/// Stage 1: best Gaussian sum found from a randomised simplex.
RadialField parametric_start(double p, const GridPtr& grid, int gaussians, int iterations, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    const double min_width = 4.0 * grid->dr(), max_width = grid->r_max() / 8.0;
    std::vector<double> x0;
    for (int i = 0; i < gaussians; ++i) {
        x0.push_back(jitter(rng) - 0.5 * i);                                  // log amplitude
        x0.push_back(std::log(0.5) + static_cast<double>(i) * 0.7 + jitter(rng));  // log width
    }
    auto objective = [&](const std::vector<double>& x) {
        for (std::size_t i = 1; i < x.size(); i += 2)
            if (std::exp(x[i]) < min_width || std::exp(x[i]) > max_width || x[i - 1] > 5.0) return kInf;
        return projected_from_report(report(gaussian_sum(grid, x), p));
    };
    return gaussian_sum(grid, nelder_mead(objective, x0, 0.5, iterations));
}

struct DescentOutcome {
    RadialField u;
    int iterations = 0;
    bool converged = false;
    double stage1 = 0.0;
    double fd_error = 0.0;
    std::vector<RadialField> visited;
};

double fd_check(const RadialField& u, double p, const RadialField& grad) {
    // Direction: a smooth bump scaled to the field.
    double umax = 0.0;
    for (const Complex& z : u.values) umax = std::max(umax, std::abs(z));
    RadialField h = RadialField::gaussian(u.grid, umax, 1.5, 0.0);
    const double eps = 1e-5;
    RadialField plus = u, minus = u;
    for (std::size_t j = 0; j < u.size(); ++j) {
        plus.values[j] += eps * h.values[j];
        minus.values[j] -= eps * h.values[j];
    }
    const double fd = (projected_action_of(plus, p) - projected_action_of(minus, p)) / (2.0 * eps);
    const RealSamples& w = u.grid->weights();
    const double an = inner_w(grad.values, h.values, w);
    // Normalised by |S^'| |h| so that a nearly stationary iterate does not
    // inflate the relative error of a vanishing directional derivative.
    const double scale = std::sqrt(inner_w(grad.values, grad.values, w) * inner_w(h.values, h.values, w));
    return std::abs(fd - an) / std::max(scale, 1e-300);
}

DescentOutcome descend(double p, const GridPtr& grid, const DescentConfig& cfg, std::uint64_t seed, int gaussians) {
    DescentOutcome out;
    const H1Preconditioner prec(*grid);
    const RealSamples& w = grid->weights();

    RadialField u = project_to_nehari(parametric_start(p, grid, gaussians, cfg.simplex_iterations, seed), p, 1e-6);
    double j_cur = projected_action_of(u, p);
    out.stage1 = j_cur;
    std::vector<double> history{j_cur};
    double step = 1.0;
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        if (it % cfg.history_stride == 0) out.visited.push_back(u);
        const RadialField g = projected_action_gradient(u, p);
        if (cfg.fd_check_interval > 0 && it % cfg.fd_check_interval == 0)
            out.fd_error = std::max(out.fd_error, fd_check(u, p, g));
        ComplexSamples dir = prec.apply(g.values);
        // S^ is scale invariant only up to discretisation error; left alone,
        // the descent slowly slides along the dilation orbit to harvest that
        // error.  Remove the dilation generator u + r u_r from the direction.
        {
            const RadialField ur = radial_derivative(u);
            ComplexSamples gen(u.size());
            for (std::size_t j = 0; j < gen.size(); ++j) gen[j] = u.values[j] + grid->nodes()[j] * ur.values[j];
            const double gg = inner_w(gen, gen, w);
            if (gg > 0.0) {
                const double c = inner_w(gen, dir, w) / gg;
                for (std::size_t j = 0; j < dir.size(); ++j) dir[j] -= c * gen[j];
            }
        }
        const double slope = inner_w(g.values, dir, w);
        if (!(slope > 0.0)) { out.converged = true; break; }

        bool accepted = false;
        step = std::min(2.0 * step, 4.0);
        RadialField trial = u;
        for (int halving = 0; halving < 60; ++halving, step *= 0.5) {
            for (std::size_t j = 0; j < u.size(); ++j) trial.values[j] = u.values[j] - step * dir[j];
            const double j_new = projected_action_of(trial, p);
            if (j_new <= j_cur - 1e-4 * step * slope) {
                accepted = true;
                j_cur = j_new;
                break;
            }
        }
        if (!accepted) { out.converged = true; break; }
        u = trial;

        // Keep the iterate near the manifold so resolution is not lost to a
        // drifting scale; the objective is scale invariant either way.
        const FunctionalReport rep = report(u, p);
        if (!(rep.p_norm > 0.0)) throw DomainError("minimize_d: p_norm collapsed to zero");
        if (std::abs(nehari_lambda_star(rep) - 1.0) > 0.02) {
            u = project_to_nehari(u, p, 1e-6);
            j_cur = projected_action_of(u, p);
            history.assign(1, j_cur);
            continue;
        }
        history.push_back(j_cur);
        const auto window = static_cast<std::size_t>(cfg.stall_window);
        if (history.size() > window) {
            const double old = history[history.size() - 1 - window];
            if ((old - j_cur) / std::abs(j_cur) < cfg.stall_tolerance) {
                out.converged = true;
                ++it;
                break;
            }
        }
    }
    out.iterations = it;
    out.visited.push_back(u);
    out.u = std::move(u);
    return out;
}

}  // namespace

void DescentConfig::validate() const {
    require(starts >= 1, "descent.starts: must be >= 1");
    require(gaussians >= 3 && gaussians <= 6, "descent.gaussians: must be in 3..6");
    require(simplex_iterations >= 1, "descent.simplex_iterations: must be >= 1");
    require(max_iterations >= 1, "descent.max_iterations: must be >= 1");
    require(stall_window >= 1, "descent.stall_window: must be >= 1");
    require(stall_tolerance > 0.0, "descent.stall_tolerance: must be positive");
    require(projection_tolerance > 0.0, "descent.projection_tolerance: must be positive");
    require(history_stride >= 1, "descent.history_stride: must be >= 1");
    require(l_overshoot > 0.0 && l_overshoot < 0.5, "descent.l_overshoot: must be in (0, 0.5)");
}

double projected_action_of(const RadialField& u, double p) { return projected_from_report(report(u, p)); }

RadialField projected_action_gradient(const RadialField& u, double p) {
    require_supercritical(p);
    u.check_finite();
    const GaugePotentials g = gauge_from_field(u);
    const FunctionalReport rep = report(u, p, g);
    if (!(rep.p_norm > 0.0)) throw DomainError("projected action gradient: zero field");
    const Coefficients k = projected_coefficients(p);
    const double d = rep.covariant_kinetic(), n = rep.p_norm;
    const double cd = 2.0 * k.c * k.a * std::pow(d, k.a - 1.0) * std::pow(n, k.b);  // factor on D'/2
    const double cn = (p + 1.0) * k.c * k.b * std::pow(d, k.a) * std::pow(n, k.b - 1.0);
    const ComplexSamples ku = u.grid->stiffness().apply(u.values);
    const RealSamples& w = u.grid->weights();
    ComplexSamples out(u.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double a2 = std::norm(u.values[j]);
        const double local = g.a_theta_over_r[j] * g.a_theta_over_r[j] + g.a_zero[j];
        out[j] = u.values[j] + cd * (ku[j] / w[j] + local * u.values[j]) +
                 cn * std::pow(a2, 0.5 * (p - 1.0)) * u.values[j];
    }
    return RadialField(u.grid, std::move(out), u.label);
}

RadialField project_to_nehari(const RadialField& u, double p, double tol) {
    require(tol > 0.0 && std::isfinite(tol), "project_to_nehari: tol must be positive");
    RadialField v = u;
    for (int round = 0; round < 30; ++round) {
        const FunctionalReport rep = report(v, p);
        if (!(rep.p_norm > 0.0)) throw DomainError("project_to_nehari: zero field has no projection");
        if (std::abs(rep.nehari) <= tol * rep.covariant_kinetic()) return v;
        v = scale_field(v, nehari_lambda_star(rep));
    }
    throw DomainError("project_to_nehari: no convergence in 30 rescalings");
}

GroundStateResult minimize_d(double p, const GridPtr& grid, const DescentConfig& cfg) {
    require_supercritical(p);
    require(grid != nullptr, "minimize_d: null grid");
    cfg.validate();

    std::vector<std::future<DescentOutcome>> jobs;
    for (int s = 0; s < cfg.starts; ++s) {
        const std::uint64_t seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(s);
        const int gaussians = cfg.gaussians + (s % 2);
        jobs.push_back(std::async(std::launch::async, [=, &cfg] {
            return descend(p, grid, cfg, seed, std::min(gaussians, 6));
        }));
    }
    std::vector<DescentOutcome> outcomes;
    for (auto& job : jobs) outcomes.push_back(job.get());
    // Deterministic reduction: lowest projected action, ties by start index.
    std::size_t best = 0;
    std::vector<double> values;
    for (const DescentOutcome& o : outcomes) values.push_back(projected_action_of(o.u, p));
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[best]) best = i;
    DescentOutcome& o = outcomes[best];

    GroundStateResult res;
    res.p = p;
    res.iterations = o.iterations;
    res.converged = o.converged;
    res.stage1_value = o.stage1;
    for (const DescentOutcome& x : outcomes) res.fd_check_max_error = std::max(res.fd_check_max_error, x.fd_error);
    RadialField prof = project_to_nehari(o.u, p, cfg.projection_tolerance);
    for (Complex& z : prof.values) z = Complex(std::max(0.0, z.real()), 0.0);
    prof.label = "ground_state";
    const FunctionalReport rep = report(prof, p);
    res.d_value = rep.action;
    res.residual_k = std::abs(rep.nehari);
    res.residual_k_relative = res.residual_k / rep.covariant_kinetic();
    const RadialField sp = action_gradient(prof, p);
    const RealSamples& w = grid->weights();
    res.gradient_residual = std::sqrt(inner_w(sp.values, sp.values, w) / inner_w(prof.values, prof.values, w));
    res.profile = std::move(prof);
    res.visited = std::move(o.visited);
    res.d_by_l_characterization = cross_check_characterizations(res, p, {}, cfg.l_overshoot);
    return res;
}

double cross_check_characterizations(const GroundStateResult& result, double p, const std::vector<RadialField>& trials,
                                     double l_overshoot) {
    require_supercritical(p);
    require(l_overshoot > 0.0, "cross_check_characterizations: overshoot must be positive");
    std::vector<const RadialField*> pool;
    if (result.profile.grid) pool.push_back(&result.profile);
    for (const RadialField& v : result.visited) pool.push_back(&v);
    for (const RadialField& v : trials) pool.push_back(&v);
    double best = kInf;
    for (const RadialField* v : pool) {
        const FunctionalReport rep = report(*v, p);
        if (!(rep.p_norm > 0.0)) continue;
        const FunctionalReport scaled = report(scale_field(*v, nehari_lambda_star(rep) * (1.0 + l_overshoot)), p);
        if (scaled.nehari <= 0.0) best = std::min(best, scaled.l_value);
    }
    if (!std::isfinite(best)) throw DomainError("cross_check_characterizations: no trial with K <= 0");
    return best;
}

std::string GroundStateResult::to_json() const {
    nlohmann::ordered_json j;
    j["p"] = p;
    j["d_value"] = d_value;
    j["residual_k"] = residual_k;
    j["residual_k_relative"] = residual_k_relative;
    j["gradient_residual"] = gradient_residual;
    j["d_by_l_characterization"] = d_by_l_characterization;
    j["iterations"] = iterations;
    j["converged"] = converged;
    j["stage1_value"] = stage1_value;
    j["fd_check_max_error"] = fd_check_max_error;
    if (profile.grid) {
        j["n"] = profile.grid->n();
        j["r_max"] = profile.grid->r_max();
    }
    return j.dump(2);
}

std::string GroundStateResult::profile_csv() const {
    std::ostringstream os;
    os << std::setprecision(17) << "r,value\n";
    if (!profile.grid) return os.str();
    for (std::size_t j = 0; j < profile.size(); ++j)
        os << profile.grid->nodes()[j] << ',' << profile.values[j].real() << '\n';
    return os.str();
}

}  // namespace css
