#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "css/functionals.hpp"
#include "css/ground_state.hpp"
#include "oracle.hpp"

using namespace css;

namespace {

GridPtr grid() { return RadialGrid::create(4096, 32.0); }

RadialField sample_mixture(const GridPtr& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a1 = 0.5 + u(rng), a2 = 0.5 * u(rng), w1 = 0.7 + u(rng), w2 = 0.5 + u(rng), c2 = 2.0 * u(rng);
    const double chirp = 0.3 * (u(rng) - 0.5);
    return RadialField::sample(g, [=](double r) {
        const double z = (r - c2) / w2;
        return Complex(a1 * std::exp(-r * r / (2 * w1 * w1)) + a2 * std::exp(-0.5 * z * z), 0.0) *
               std::exp(Complex(0.0, chirp * r * r));
    });
}

}  // namespace

TEST(Functionals, GaussianClosedForms) {
    const RadialField u = RadialField::gaussian(grid(), 1.0);
    const FunctionalReport r = report(u, 5.0);
    EXPECT_NEAR(r.mass, oracle::pi, 1e-9);
    EXPECT_NEAR(r.grad_kinetic, oracle::pi, 1e-7);
    EXPECT_NEAR(r.p_norm, oracle::pi / 3.0, 3e-9);
    EXPECT_NEAR(r.q_charge / oracle::q_charge_gaussian(), 1.0, 1e-6);
    const double d = oracle::pi + oracle::q_charge_gaussian();
    EXPECT_NEAR(r.energy, d / 2.0 - oracle::pi / 18.0, 1e-6);
    EXPECT_NEAR(r.nehari, d - 2.0 / 3.0 * oracle::pi / 3.0, 1e-6);
}

TEST(Functionals, LIdentity) {
    for (double p : {3.5, 5.0, 7.0}) {
        const RadialField u = sample_mixture(grid(), 3);
        const FunctionalReport r = report(u, p);
        const double rhs = r.mass / 2.0 + (p - 3.0) / (2.0 * (p + 1.0)) * r.p_norm;
        EXPECT_NEAR(r.l_value, rhs, 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST(Functionals, ZeroFieldAndContracts) {
    const FunctionalReport r = report(RadialField::zeros(grid()), 5.0);
    EXPECT_EQ(r.mass, 0.0);
    EXPECT_EQ(r.action, 0.0);
    EXPECT_EQ(r.nehari, 0.0);
    EXPECT_THROW(report(RadialField::gaussian(grid(), 1.0), 3.0), ContractViolation);
    EXPECT_THROW(nehari_lambda_star(r), DomainError);
}

TEST(Functionals, ScalingDerivativeIsNehari) {
    // d/dlambda S(u_lambda) at lambda = 1 equals K(u), with u_lambda resampled on the grid.
    const double p = 5.0, h = 1e-3;
    const RadialField u = sample_mixture(grid(), 7);
    const FunctionalReport r = report(u, p);
    const double plus = report(scale_field(u, 1.0 + h), p).action;
    const double minus = report(scale_field(u, 1.0 - h), p).action;
    const double fd = (plus - minus) / (2.0 * h);
    EXPECT_NEAR(fd / r.nehari, 1.0, 1e-4);
}

TEST(Functionals, ScalingLawsMatchResampling) {
    const double p = 5.0;
    const RadialField u = sample_mixture(grid(), 9);
    const FunctionalReport r = report(u, p);
    for (double lambda : {0.6, 1.4}) {
        const FunctionalReport s = report(scale_field(u, lambda), p);
        EXPECT_NEAR(s.action / scaled_action(r, lambda), 1.0, 1e-6);
        EXPECT_NEAR(s.nehari, scaled_nehari(r, lambda), 1e-6 * std::abs(r.covariant_kinetic()));
    }
}

TEST(Functionals, NehariProjection) {
    const double p = 5.0;
    const RadialField u = sample_mixture(grid(), 13);
    const RadialField v = project_to_nehari(u, p, 1e-10);
    const FunctionalReport r = report(v, p);
    EXPECT_LT(std::abs(r.nehari) / r.covariant_kinetic(), 1e-8);
    // S at the projected point equals the closed-form projected action.
    EXPECT_NEAR(r.action / projected_action(report(u, p)), 1.0, 1e-6);
}

TEST(Functionals, GradientMatchesFiniteDifferences) {
    const auto t0 = std::chrono::steady_clock::now();
    const double p = 5.0;
    const GridPtr g = grid();
    const RadialField u = sample_mixture(g, 17);
    const RadialField grad = action_gradient(u, p);
    const RealSamples& w = g->weights();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        // Smooth random direction: Gaussian bump with random centre, width and phase.
        const double c = 3.0 * unif(rng), wd = 0.5 + unif(rng), ph = 6.28 * unif(rng);
        const RadialField dir = RadialField::sample(g, [&](double r) {
            const double z = (r - c) / wd;
            return std::polar(std::exp(-0.5 * z * z), ph + 0.3 * r);
        });
        double analytic = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) analytic += w[j] * std::real(grad.values[j] * std::conj(dir.values[j]));
        const double eps = 1e-5;
        RadialField up = u, um = u;
        for (std::size_t j = 0; j < u.size(); ++j) {
            up.values[j] += eps * dir.values[j];
            um.values[j] -= eps * dir.values[j];
        }
        const double fd = (report(up, p).action - report(um, p).action) / (2.0 * eps);
        worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-3));
    }
    EXPECT_LT(worst, 1e-5);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
}

TEST(Functionals, ScaleFieldIdentityAndSupport) {
    const RadialField u = sample_mixture(grid(), 19);
    const RadialField same = scale_field(u, 1.0);
    for (std::size_t j = 0; j < u.size(); ++j) EXPECT_NEAR(std::abs(same.values[j] - u.values[j]), 0.0, 1e-14);
    EXPECT_THROW(scale_field(u, 0.0), ContractViolation);
}

TEST(Functionals, JsonHasAllFields) {
    const auto j = nlohmann::json::parse(to_json(report(RadialField::gaussian(grid(), 1.0), 5.0)));
    for (const char* k : {"mass", "energy", "action", "nehari", "l_value", "q_charge", "grad_kinetic", "p_norm", "p"})
        EXPECT_TRUE(j.contains(k)) << k;
}
