/// @file functionals.cpp
/// @brief Functional evaluation, scaling and first variation.
#include "css/functionals.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace css {

void require_supercritical(double p) {
    require(std::isfinite(p) && p > 3.0, "exponent p must satisfy p > 3");
}

FunctionalReport report(const RadialField& u, double p) {
    require_supercritical(p);
    return report(u, p, gauge_from_field(u));
}

FunctionalReport report(const RadialField& u, double p, const GaugePotentials& g) {
    require_supercritical(p);
    u.check_finite();
    const RealSamples& w = u.grid->weights();
    FunctionalReport rep;
    rep.p = p;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double a2 = std::norm(u.values[j]);
        rep.mass += w[j] * a2;
        rep.p_norm += w[j] * std::pow(a2, 0.5 * (p + 1.0));
    }
    rep.grad_kinetic = kinetic_energy(u);
    rep.q_charge = gauge_charge(u, g);
    const double d = rep.covariant_kinetic();
    rep.energy = 0.5 * d - rep.p_norm / (p + 1.0);
    rep.action = rep.energy + 0.5 * rep.mass;
    rep.nehari = d - (p - 1.0) / (p + 1.0) * rep.p_norm;
    rep.l_value = rep.action - 0.5 * rep.nehari;
    return rep;
}

RadialField scale_field(const RadialField& u, double lambda) {
    require(std::isfinite(lambda) && lambda > 0.0, "scale_field: lambda must be positive");
    u.check_finite();
    const int n = u.grid->n();
    const double h = u.grid->dr();
    // Even extension across r = 0, zero beyond the last node.
    auto at = [&](int i) -> Complex {
        if (i < 0) i = -i;
        return i < n ? u.values[static_cast<std::size_t>(i)] : Complex{};
    };
    ComplexSamples out(u.size());
    for (int j = 0; j < n; ++j) {
        const double x = lambda * u.grid->node(j) / h;  // fractional index
        if (x > n - 1) continue;
        const int i = std::min(static_cast<int>(std::floor(x)), n - 2);
        const double s = x - i;  // in [0, 1]
        // Cubic Lagrange basis on nodes i-1, i, i+1, i+2.
        const double lm1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        const double l0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        const double l1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        const double l2 = (s + 1.0) * s * (s - 1.0) / 6.0;
        out[static_cast<std::size_t>(j)] =
            lambda * (lm1 * at(i - 1) + l0 * at(i) + l1 * at(i + 1) + l2 * at(i + 2));
    }
    return RadialField(u.grid, std::move(out), u.label);
}

double nehari_lambda_star(const FunctionalReport& rep) {
    require_supercritical(rep.p);
    if (!(rep.p_norm > 0.0)) throw DomainError("nehari_lambda_star: p_norm = 0, no projection exists");
    const double ratio = (rep.p + 1.0) * rep.covariant_kinetic() / ((rep.p - 1.0) * rep.p_norm);
    return std::pow(ratio, 1.0 / (rep.p - 3.0));
}

double scaled_action(const FunctionalReport& rep, double lambda) {
    return 0.5 * lambda * lambda * rep.covariant_kinetic() + 0.5 * rep.mass -
           std::pow(lambda, rep.p - 1.0) * rep.p_norm / (rep.p + 1.0);
}

double scaled_nehari(const FunctionalReport& rep, double lambda) {
    return lambda * lambda * rep.covariant_kinetic() -
           std::pow(lambda, rep.p - 1.0) * (rep.p - 1.0) / (rep.p + 1.0) * rep.p_norm;
}

double projected_action(const FunctionalReport& rep) {
    return scaled_action(rep, nehari_lambda_star(rep));
}

RealSamples nonlinear_potential(const RadialField& u, double p, const GaugePotentials& g) {
    RealSamples v(u.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double a2 = std::norm(u.values[j]);
        v[j] = g.a_theta_over_r[j] * g.a_theta_over_r[j] + g.a_zero[j] - std::pow(a2, 0.5 * (p - 1.0));
    }
    return v;
}

RadialField action_gradient(const RadialField& u, double p) {
    require_supercritical(p);
    u.check_finite();
    const GaugePotentials g = gauge_from_field(u);
    const RealSamples v = nonlinear_potential(u, p, g);
    ComplexSamples ku = u.grid->stiffness().apply(u.values);
    const RealSamples& w = u.grid->weights();
    for (std::size_t j = 0; j < ku.size(); ++j) ku[j] = ku[j] / w[j] + (1.0 + v[j]) * u.values[j];
    return RadialField(u.grid, std::move(ku), u.label);
}

std::string to_json(const FunctionalReport& rep) {
    nlohmann::ordered_json j;
    j["mass"] = rep.mass;
    j["energy"] = rep.energy;
    j["action"] = rep.action;
    j["nehari"] = rep.nehari;
    j["l_value"] = rep.l_value;
    j["q_charge"] = rep.q_charge;
    j["grad_kinetic"] = rep.grad_kinetic;
    j["p_norm"] = rep.p_norm;
    j["p"] = rep.p;
    return j.dump();
}

}  // namespace css
