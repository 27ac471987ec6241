#include <gtest/gtest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "css/dichotomy.hpp"
#include "css/ground_state.hpp"
#include "oracle.hpp"

using namespace css;

namespace {

constexpr double kP = 5.0;
constexpr double kD = 4.0902;  // d at p = 5 on the reference grid (see test_ground_state)

SimConfig small_run(double t_end, int n = 2048, double r_max = 64.0) {
    SimConfig c;
    c.p = kP;
    c.n = n;
    c.r_max = r_max;
    c.dt = 0.01;
    c.t_end = t_end;
    c.log_stride = 5;
    return c;
}

}  // namespace

TEST(Cutoff, Invariants) {
    const GridPtr g = RadialGrid::create(8192, 400.0);
    for (double big_r : {8.0, 16.0, 32.0}) {
        const CutoffProfile c = CutoffProfile::create(g, big_r);
        for (std::size_t j = 0; j < c.chi.size(); ++j) {
            const double r = g->nodes()[j];
            if (r <= big_r) {
                EXPECT_EQ(c.chi[j], 0.5 * r * r) << "R=" << big_r << " r=" << r;
            }
            if (r >= 10.0 * big_r) {
                EXPECT_EQ(c.chi[j], c.chi.back());
            }
            EXPECT_LE(c.chi_second[j], 1.0 + 1e-12);
        }
    }
    EXPECT_THROW(CutoffProfile::create(g, 0.0), ContractViolation);
}

TEST(Cutoff, UnitProfileShape) {
    EXPECT_EQ(cutoff_chi(0.5), 0.125);
    EXPECT_NEAR(cutoff_chi_prime(10.0), 0.0, 1e-12);
    EXPECT_NEAR(cutoff_chi_second(1.0), 1.0, 1e-12);
    EXPECT_NEAR(cutoff_chi_second(10.0), 0.0, 1e-12);
    // chi' is continuous at the junctions.
    EXPECT_NEAR(cutoff_chi_prime(1.0 - 1e-9), cutoff_chi_prime(1.0 + 1e-9), 1e-8);
    for (double s = 0.0; s < 12.0; s += 0.01) EXPECT_LE(cutoff_chi_second(s), 1.0 + 1e-12);
}

TEST(Virial, RealDataGiveZero) {
    const GridPtr g = RadialGrid::create(4096, 16.0);
    const CutoffProfile c = CutoffProfile::create(g, 8.0);
    EXPECT_NEAR(virial_value(RadialField::gaussian(g, 1.3, 0.9), c), 0.0, 1e-12);
}

TEST(Virial, ChirpedGaussianClosedForm) {
    // Im(conj(u) u_r) = 2 beta r |u|^2, so V = 2 pi int 2 beta r^3 e^{-r^2} dr = 2 pi beta.
    const GridPtr g = RadialGrid::create(4096, 16.0);
    const CutoffProfile c = CutoffProfile::create(g, 8.0);
    const double v = virial_value(RadialField::gaussian(g, 1.0, 1.0, 0.25), c);
    EXPECT_NEAR(v, oracle::pi / 2.0, 1e-4);
    const double v2 = virial_value(RadialField::gaussian(g, 1.0, 1.0, 0.5), c);
    EXPECT_NEAR(v2 / v, 2.0, 1e-5);
}

TEST(Virial, TwoDimensionalDefinitionAgrees) {
    // Evaluate Im int conj(u) (D_1 u d_1 chi_R + D_2 u d_2 chi_R) dx on a Cartesian grid with
    // A = A_theta(r) (-x_2, x_1) / r^2 and centred differences; compare with the radial form.
    const double beta = 0.25, big_r = 1.5, half = 8.0;
    const int m = 641;
    const double h = 2.0 * half / (m - 1);
    auto u_at = [&](double x, double y) {
        const double r2 = x * x + y * y;
        return std::exp(Complex(-0.5 * r2, beta * r2));
    };
    double v2d = 0.0;
    for (int i = 1; i < m - 1; ++i)
        for (int k = 1; k < m - 1; ++k) {
            const double x = -half + i * h, y = -half + k * h, r = std::hypot(x, y);
            if (r == 0.0) continue;
            const Complex u = u_at(x, y);
            const Complex ux = (u_at(x + h, y) - u_at(x - h, y)) / (2.0 * h);
            const Complex uy = (u_at(x, y + h) - u_at(x, y - h)) / (2.0 * h);
            const double at = oracle::a_theta_gaussian(r);
            const double a1 = -at * y / (r * r), a2 = at * x / (r * r);
            const double dchi = big_r * cutoff_chi_prime(r / big_r);
            const Complex d1 = ux + Complex(0.0, a1) * u, d2 = uy + Complex(0.0, a2) * u;
            v2d += h * h * std::imag(std::conj(u) * (d1 * (dchi * x / r) + d2 * (dchi * y / r)));
        }
    const GridPtr g = RadialGrid::create(4096, 16.0);
    const double radial = virial_value(RadialField::gaussian(g, 1.0, 1.0, beta), CutoffProfile::create(g, big_r));
    EXPECT_NEAR(v2d / radial, 1.0, 0.01);
}

TEST(Classify, Examples) {
    const GridPtr g = RadialGrid::create(4096, 32.0);
    const ClassificationResult small = classify(RadialField::gaussian(g, 0.1), kP, kD);
    EXPECT_EQ(small.set_label, SetLabel::K_plus);
    EXPECT_GT(small.margin, 0.0);
    const ClassificationResult big = classify(RadialField::gaussian(g, 2.5), kP, kD);
    EXPECT_EQ(big.set_label, SetLabel::K_minus);
    const ClassificationResult above = classify(RadialField::gaussian(g, 1.5), kP, kD);
    EXPECT_EQ(above.set_label, SetLabel::above_threshold);
    EXPECT_THROW(classify(RadialField::gaussian(g, 1.0), kP, 0.0), ContractViolation);
    const auto j = nlohmann::json::parse(small.to_json());
    EXPECT_EQ(j.at("set_label").get<std::string>(), "K_plus");
}

TEST(Classify, ScaledGroundStateIsKMinus) {
    const GroundStateResult gs = minimize_d(kP, RadialGrid::create(1024, 32.0));
    const FunctionalReport r = report(gs.profile, kP);
    const RadialField pushed = scale_field(gs.profile, nehari_lambda_star(r) * 1.05);
    const ClassificationResult c = classify(pushed, kP, gs.d_value);
    EXPECT_EQ(c.set_label, SetLabel::K_minus);
    EXPECT_LT(c.s_value, gs.d_value);
    EXPECT_GT(c.s_value, 0.99 * gs.d_value);
    // The ground state itself sits on the boundary.
    EXPECT_EQ(classify(gs.profile, kP, gs.d_value).set_label, SetLabel::on_boundary);
}

TEST(Dynamics, KPlusInvarianceAlongTheFlow) {
    for (double amp : {0.25, 0.5, 1.0}) {
        const TrajectoryLog log = propagate(RadialField::gaussian(RadialGrid::create(2048, 64.0), amp), small_run(2.0));
        ASSERT_EQ(log.termination, Termination::completed);
        for (const FunctionalReport& r : log.reports) {
            EXPECT_LT(r.action, kD);
            EXPECT_GT(r.nehari, 0.0);
        }
    }
}

TEST(Dynamics, LinearVirialRateIsTwiceKinetic) {
    SimConfig c = small_run(1.0, 2048, 64.0);
    c.nonlinear_on = false;
    c.log_stride = 1;
    c.virial_radius = 8.0;
    const TrajectoryLog log = propagate(RadialField::gaussian(RadialGrid::create(2048, 64.0), 1.0), c);
    for (std::size_t i = 1; i + 1 < log.size(); i += 10) {
        const double dv = (log.virial[i + 1] - log.virial[i - 1]) / (2.0 * c.dt);
        EXPECT_NEAR(dv / (2.0 * log.reports[i].grad_kinetic), 1.0, 0.05);
    }
}

TEST(Dynamics, VirialRateTracksTwoK) {
    SimConfig c = small_run(2.0, 2048, 64.0);
    c.log_stride = 1;
    c.virial_radius = 8.0;
    const TrajectoryLog log = propagate(RadialField::gaussian(RadialGrid::create(2048, 64.0), 0.5), c);
    const VirialRateReport v = virial_rate_check(log);
    EXPECT_LT(v.max_deviation, 0.05 * v.scale);
    EXPECT_GT(v.final_dv_dt, 0.0);
    TrajectoryLog tiny = log;
    tiny.times.resize(2);
    EXPECT_THROW(virial_rate_check(tiny), DomainError);
}

TEST(Dynamics, KMinusVirialRateTurnsNegative) {
    SimConfig c;
    c.p = kP;
    c.n = 4096;
    c.r_max = 32.0;
    c.dt = 1e-4;
    c.t_end = 5.0;
    c.log_stride = 1;
    c.virial_radius = 8.0;
    const TrajectoryLog log = propagate(RadialField::gaussian(RadialGrid::create(4096, 32.0), 2.5), c);
    ASSERT_EQ(log.termination, Termination::blowup_detected);
    const VirialRateReport v = virial_rate_check(log);
    EXPECT_LT(v.final_dv_dt, 0.0);
    EXPECT_THROW(scattering_monitor(log, c.dt), DomainError);
}

TEST(Morawetz, ZeroFieldHasZeroAccumulators) {
    const TrajectoryLog log = propagate(RadialField::zeros(RadialGrid::create(512, 32.0)), small_run(1.0, 512, 32.0));
    const MorawetzReport m = morawetz_check(log, kP, {0.5, 1.0});
    for (double a : m.accumulator) EXPECT_EQ(a, 0.0);
}

TEST(Morawetz, IdentityAndBoundedRatios) {
    const TrajectoryLog log = propagate(RadialField::gaussian(RadialGrid::create(2048, 64.0), 0.5), small_run(2.0));
    const MorawetzReport m = morawetz_check(log, kP, {0.5, 1.0, 1.5, 2.0});
    EXPECT_NEAR(m.alpha, 1.0 / 3.0, 1e-15);
    EXPECT_LT(m.max_identity_error, 1e-5);
    EXPECT_TRUE(m.bounded);
    EXPECT_THROW(morawetz_check(log, kP, {0.123}), DomainError);
    EXPECT_EQ(m.to_csv().substr(0, m.to_csv().find('\n')), "T,accumulator,ratio");
}

TEST(Scattering, LinearRunHasNoIncrements) {
    SimConfig c = small_run(2.0, 1024, 64.0);
    c.nonlinear_on = false;
    c.snapshot_times = {0.0, 0.5, 1.0, 1.5, 2.0};
    const TrajectoryLog log = propagate(RadialField::gaussian(RadialGrid::create(1024, 64.0), 1.0), c);
    const ScatteringReport s = scattering_monitor(log, c.dt);
    ASSERT_EQ(s.increments.size(), 4u);
    for (double inc : s.increments) EXPECT_LT(inc, 1e-10);
}

TEST(Scattering, NeedsTwoSnapshots) {
    const GridPtr g = RadialGrid::create(256, 16.0);
    EXPECT_THROW(scattering_monitor(std::vector<double>{0.0}, {RadialField::gaussian(g, 1.0)}, 0.01), ContractViolation);
}
