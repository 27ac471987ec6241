#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "css/radial_core.hpp"
#include "oracle.hpp"

using namespace css;

namespace {

GridPtr fine() { return RadialGrid::create(4096, 16.0); }

}  // namespace

TEST(RadialGrid, RejectsDegenerateGrids) {
    EXPECT_THROW(RadialGrid::create(RadialGrid::kMinNodes - 1, 10.0), ContractViolation);
    EXPECT_THROW(RadialGrid::create(100, 0.0), ContractViolation);
    EXPECT_THROW(RadialGrid::create(100, -1.0), ContractViolation);
    EXPECT_THROW(RadialGrid::create(100, std::numeric_limits<double>::infinity()), ContractViolation);
}

TEST(RadialGrid, NodesAndWeights) {
    const GridPtr g = RadialGrid::create(101, 10.0);
    EXPECT_DOUBLE_EQ(g->dr(), 0.1);
    EXPECT_EQ(g->nodes().front(), 0.0);
    EXPECT_NEAR(g->nodes().back(), 10.0, 1e-12);
    for (double w : g->weights()) EXPECT_GT(w, 0.0);
    // Far from both ends the weights are the plain 2 pi r dr.
    EXPECT_NEAR(g->weights()[50], 2.0 * oracle::pi * 5.0 * 0.1, 1e-12);
}

TEST(RadialGrid, StiffnessAnnihilatesConstants) {
    const GridPtr g = RadialGrid::create(200, 10.0);
    const RealSamples ones(200, 1.0);
    const RealSamples k1 = g->stiffness().apply(ones);
    // Every row away from the outer wall (a zero ghost beyond r_max) is exact on constants.
    for (std::size_t j = 0; j + 2 < k1.size(); ++j) EXPECT_NEAR(k1[j], 0.0, 1e-9) << j;
    EXPECT_GT(std::abs(k1.back()), 1.0);
}

TEST(Quadrature, GaussianMoments) {
    const GridPtr g = fine();
    RealSamples f(g->nodes().size()), f2(g->nodes().size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double r = g->nodes()[j];
        f[j] = std::exp(-r * r);
        f2[j] = r * r * r * r * std::exp(-r * r);
    }
    EXPECT_NEAR(integrate_radial(f, *g), oracle::plane_integral([](double r) { return std::exp(-r * r); }), 1e-10);
    EXPECT_NEAR(integrate_radial(f2, *g), 2.0 * oracle::pi, 1e-9);
}

TEST(Norms, GaussianClosedForms) {
    const RadialField u = RadialField::gaussian(fine(), 1.0);
    EXPECT_NEAR(std::pow(lq_norm(u, 2.0), 2), oracle::pi, 1e-10);
    EXPECT_NEAR(std::pow(lq_norm(u, 4.0), 4), oracle::pi / 2.0, 1e-10);
    EXPECT_NEAR(lq_norm(u, std::numeric_limits<double>::infinity()), 1.0, 1e-15);
    EXPECT_NEAR(kinetic_energy(u), oracle::pi, 1e-8);
    EXPECT_NEAR(h1_norm(u), std::sqrt(2.0 * oracle::pi), 1e-8);
    EXPECT_THROW(lq_norm(u, 0.5), ContractViolation);
}

TEST(Norms, ChirpAddsKineticEnergy) {
    // |grad(e^{-r^2/2} e^{i b r^2})|^2 = (1 + 4 b^2) r^2 e^{-r^2}.
    const double b = 0.25;
    const RadialField u = RadialField::gaussian(fine(), 1.0, 1.0, b);
    EXPECT_NEAR(kinetic_energy(u), oracle::pi * (1.0 + 4.0 * b * b), 1e-7);
}

TEST(Operators, SecondOrderLaplacian) {
    const GridPtr g = RadialGrid::create(2048, 16.0);
    const RadialField lap = laplacian_radial(RadialField::gaussian(g, 1.0));
    double err = 0.0;
    for (std::size_t j = 0; j < lap.size(); ++j) {
        const double r = g->nodes()[j];
        err = std::max(err, std::abs(lap.values[j] - (r * r - 2.0) * std::exp(-r * r / 2.0)));
    }
    EXPECT_LT(err, 1e-4);
}

TEST(Operators, HighOrderLaplacianConverges) {
    auto error = [](int n) {
        const GridPtr g = RadialGrid::create(n, 16.0);
        const RadialField lap = laplacian_high_order(RadialField::gaussian(g, 1.0));
        double err = 0.0;
        for (std::size_t j = 0; j < lap.size(); ++j) {
            const double r = g->nodes()[j];
            err = std::max(err, std::abs(lap.values[j] - (r * r - 2.0) * std::exp(-r * r / 2.0)));
        }
        return err;
    };
    const double coarse = error(513), finer = error(1025);
    EXPECT_LT(finer, 1e-4);
    EXPECT_GT(coarse / finer, 3.0);  // at least second order, including the closure rows
}

TEST(Operators, RadialDerivative) {
    const GridPtr g = RadialGrid::create(2048, 16.0);
    const RadialField d = radial_derivative(RadialField::gaussian(g, 1.0));
    double err = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        const double r = g->nodes()[j];
        err = std::max(err, std::abs(d.values[j] + r * std::exp(-r * r / 2.0)));
    }
    EXPECT_LT(err, 1e-4);
}

TEST(Fields, FiniteChecksAndZero) {
    const GridPtr g = RadialGrid::create(64, 8.0);
    RadialField u = RadialField::zeros(g);
    EXPECT_TRUE(u.is_zero());
    EXPECT_NO_THROW(u.check_finite());
    u.values[3] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(u.check_finite(), CorruptedState);
    EXPECT_THROW(RadialField(g, ComplexSamples(10)), ContractViolation);
}

TEST(Fields, GridMismatch) {
    const RadialField a = RadialField::gaussian(RadialGrid::create(64, 8.0), 1.0);
    const RadialField b = RadialField::gaussian(RadialGrid::create(65, 8.0), 1.0);
    EXPECT_THROW(require_same_grid(a, b), ContractViolation);
    EXPECT_NO_THROW(require_same_grid(a, RadialField::gaussian(RadialGrid::create(64, 8.0), 2.0)));
}

TEST(Fields, MassFractionBeyond) {
    const GridPtr g = RadialGrid::create(1024, 20.0);
    EXPECT_LT(mass_fraction_beyond(RadialField::gaussian(g, 1.0), 0.9), 1e-30);
    // e^{-r^2/(2 w^2)} with w = 10: fraction beyond 18 is e^{-3.24} (1 - tail past 20).
    const double frac = mass_fraction_beyond(RadialField::gaussian(g, 1.0, 10.0), 0.9);
    const double exact = (std::exp(-3.24) - std::exp(-4.0)) / (1.0 - std::exp(-4.0));
    EXPECT_NEAR(frac, exact, 1e-3);
}

TEST(Inequalities, StraussBoundOnGaussians) {
    const GridPtr g = fine();
    for (double w : {0.3, 1.0, 3.0}) EXPECT_LT(strauss_ratio(RadialField::gaussian(g, 1.0, w)), 1.0 / std::sqrt(2.0 * oracle::pi));
    EXPECT_THROW(strauss_ratio(RadialField::zeros(g)), ContractViolation);
}
