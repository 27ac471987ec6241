/// @file inequalities.cpp
/// @brief Ratios, admissibility, constants and sweeps of the inequality harness.
#include "css/inequalities.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "css/functionals.hpp"
#include "css/gauge.hpp"
#include "css/penta_ldlt.hpp"

namespace css {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLineTol = 1e-12;

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

bool fail(std::string* why, const std::string& msg) {
    if (why) *why = msg;
    return false;
}

/// || g r^e ||_{L^q(R^2)} for samples g >= 0 with g ~ c r^k near the origin.
double weighted_norm(const RealSamples& g, double e, double q, double k, double c, const RadialGrid& grid) {
    const RealSamples& r = grid.nodes();
    const RealSamples& w = grid.weights();
    const double lead = k + e;  // power of r in g r^e near 0
    if (std::isinf(q)) {
        double sup = lead > 0.0 ? 0.0 : (lead == 0.0 ? std::abs(c) : (c == 0.0 ? 0.0 : kInf));
        for (std::size_t j = 1; j < g.size(); ++j) sup = std::max(sup, std::abs(g[j]) * std::pow(r[j], e));
        return sup;
    }
    double acc = 0.0;
    for (std::size_t j = 1; j < g.size(); ++j) acc += w[j] * std::pow(std::abs(g[j]) * std::pow(r[j], e), q);
    // Origin cell: equal-area disc of radius rho0 with g = c r^k.
    const double m = lead * q + 2.0;
    if (c != 0.0) {
        if (!(m > 0.0)) return kInf;
        const double rho0 = std::sqrt(w[0] / std::numbers::pi);
        acc += std::pow(std::abs(c), q) * 2.0 * std::numbers::pi * std::pow(rho0, m) / m;
    }
    return std::pow(acc, 1.0 / q);
}

RealSamples absolute(const RealSamples& v) {
    RealSamples m(v.size());
    for (std::size_t j = 0; j < m.size(); ++j) m[j] = std::abs(v[j]);
    return m;
}

RealSamples magnitudes(const RadialField& u) {
    RealSamples m(u.size());
    for (std::size_t j = 0; j < m.size(); ++j) m[j] = std::abs(u.values[j]);
    return m;
}

double gn_ratio(const RadialField& u, double q, double kinetic) {
    const double alpha = 1.0 - 2.0 / q;
    const double num = lq_norm(u, q);
    const double den = std::pow(kinetic, 0.5 * alpha) * std::pow(lq_norm(u, 2.0), 1.0 - alpha);
    if (!(den > 0.0)) throw DomainError("empirical_ratio: zero right-hand side");
    return num / den;
}

double checked(double num, double den) {
    if (!(den > 0.0) || !std::isfinite(den)) throw DomainError("empirical_ratio: right-hand side is zero or infinite");
    return num / den;
}

}  // namespace

std::string to_string(InequalityKind k) {
    switch (k) {
        case InequalityKind::GN: return "GN";
        case InequalityKind::MGN: return "MGN";
        case InequalityKind::Strauss: return "Strauss";
        case InequalityKind::diamagnetic: return "diamagnetic";
        case InequalityKind::atheta_weighted: return "atheta_weighted";
        case InequalityKind::azero_weighted: return "azero_weighted";
        case InequalityKind::cor_a01: return "cor_a01";
    }
    return "GN";
}

InequalityKind inequality_kind_from_string(const std::string& s) {
    for (InequalityKind k : {InequalityKind::GN, InequalityKind::MGN, InequalityKind::Strauss,
                             InequalityKind::diamagnetic, InequalityKind::atheta_weighted,
                             InequalityKind::azero_weighted, InequalityKind::cor_a01})
        if (to_string(k) == s) return k;
    throw UsageError("unknown inequality case '" + s + "'");
}

bool admissible(const InequalityCase& c, std::string* why) {
    const Exponents& x = c.exponents;
    switch (c.kind) {
        case InequalityKind::GN:
        case InequalityKind::MGN:
            if (!(x.q >= 2.0) || std::isinf(x.q)) return fail(why, "GN: q must lie in [2, inf)");
            return true;
        case InequalityKind::Strauss:
        case InequalityKind::diamagnetic:
            return true;
        case InequalityKind::atheta_weighted: {
            if (!(x.q >= 1.0)) return fail(why, "atheta: q must be >= 1");
            if (!(x.s >= 2.0)) return fail(why, "atheta: s must be >= 2");
            if (!(x.b >= 0.0 && x.b <= 2.0)) return fail(why, "atheta: b must lie in [0, 2]");
            if (x.b == 0.0 && std::isinf(x.q) && x.s == 2.0) return true;
            if (!(x.s > 2.0)) return fail(why, "atheta: s must be > 2 off the (b=0, q=inf, s=2) point");
            if (std::abs(0.5 * x.b - (1.0 - 2.0 * inv(x.s) + inv(x.q))) > kLineTol)
                return fail(why, "atheta: b/2 = 1 - 2/s + 1/q violated");
            return true;
        }
        case InequalityKind::azero_weighted: {
            if (!(x.q >= 1.0)) return fail(why, "azero: q must be >= 1");
            if (!(x.s1 >= 2.0 && x.s2 >= 2.0)) return fail(why, "azero: s1, s2 must be >= 2");
            const double sum = 2.0 * inv(x.s1) + 2.0 * inv(x.s2);
            if (std::isinf(x.q) && x.s1 == 2.0 && x.s2 == 2.0 && x.b == 0.0 && x.a == -2.0) return true;
            if (!(x.s1 > 2.0)) return fail(why, "azero: s1 must be > 2");
            if (std::abs(0.5 * x.a + x.b - (1.0 - sum + inv(x.q))) > kLineTol)
                return fail(why, "azero: a/2 + b = 1 - 2/s1 - 2/s2 + 1/q violated");
            if (!std::isinf(x.q)) {
                if (!(inv(x.q) < sum && sum < 1.0 + inv(x.q)))
                    return fail(why, "azero: need 1/q < 2/s1 + 2/s2 < 1 + 1/q (edges excluded)");
                if (!(x.a < 2.0 / x.q)) return fail(why, "azero: need a < 2/q");
                return true;
            }
            if (!(0.0 < sum && sum < 1.0)) return fail(why, "azero: need 0 < 2/s1 + 2/s2 < 1 at q = inf (edges excluded)");
            if (!(x.a < 0.0)) return fail(why, "azero: need a < 0 at q = inf (edge a = 0 excluded)");
            return true;
        }
        case InequalityKind::cor_a01:
            if (!(x.q >= 1.0)) return fail(why, "cor_a01: q must be >= 1");
            if (std::isinf(x.q)) {
                if (!(x.a >= -2.0 && x.a <= 0.0)) return fail(why, "cor_a01: a must lie in [-2, 0] at q = inf");
                return true;
            }
            if (!(x.a > -2.0 && x.a < 2.0 / x.q)) return fail(why, "cor_a01: a must lie in (-2, 2/q)");
            return true;
    }
    return fail(why, "unknown case");
}

bool scale_invariant(const InequalityCase& c) {
    return c.kind == InequalityKind::GN || c.kind == InequalityKind::atheta_weighted ||
           c.kind == InequalityKind::azero_weighted;
}

double empirical_ratio(const InequalityCase& c, const RadialField& u) {
    std::string why;
    require(admissible(c, &why), "empirical_ratio: inadmissible exponents: " + why);
    u.check_finite();
    require(!u.is_zero(), "empirical_ratio: zero field");
    const Exponents& x = c.exponents;
    const RadialGrid& grid = *u.grid;
    switch (c.kind) {
        case InequalityKind::GN:
            return gn_ratio(u, x.q, kinetic_energy(u));
        case InequalityKind::MGN: {
            const GaugePotentials g = gauge_from_field(u);
            return gn_ratio(u, x.q, kinetic_energy(u) + gauge_charge(u, g));
        }
        case InequalityKind::Strauss:
            return strauss_ratio(u);
        case InequalityKind::diamagnetic: {
            const GaugePotentials g = gauge_from_field(u);
            const RadialField mod(u.grid, [&] {
                ComplexSamples v(u.size());
                for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::abs(u.values[j]);
                return v;
            }());
            return checked(kinetic_energy(mod), kinetic_energy(u) + gauge_charge(u, g));
        }
        case InequalityKind::atheta_weighted: {
            const GaugePotentials g = gauge_from_field(u);
            const double c0 = std::norm(u.values[0]) / 4.0;
            const double num = weighted_norm(absolute(g.a_theta), -x.b, x.q, 2.0, c0, grid);
            const double s = lq_norm(u, x.s);
            return checked(num, s * s);
        }
        case InequalityKind::azero_weighted: {
            const GaugePotentials g = gauge_from_field(u);
            const double num = weighted_norm(g.a_zero, -x.a, x.q, 0.0, g.a_zero[0], grid);
            const double s1 = lq_norm(u, x.s1);
            const double s2 = weighted_norm(magnitudes(u), x.b, x.s2, 0.0, std::abs(u.values[0]), grid);
            return checked(num, s1 * s1 * s2 * s2);
        }
        case InequalityKind::cor_a01: {
            const GaugePotentials g = gauge_from_field(u);
            const double num = weighted_norm(g.a_zero, -x.a, x.q, 0.0, g.a_zero[0], grid);
            return checked(num, std::pow(h1_norm(u), 4.0));
        }
    }
    throw ContractViolation("empirical_ratio: unknown case");
}

RadialField gn_ground_state(const GridPtr& grid, double q) {
    require(grid != nullptr, "gn_ground_state: null grid");
    require(q > 2.0 && std::isfinite(q), "gn_ground_state: q must lie in (2, inf)");
    const RealSamples& w = grid->weights();
    const SymmetricPenta& k = grid->stiffness();
    const SymmetricPentaLdlt<double> solver(w, k, 1.0);
    const double gamma = (q - 1.0) / (q - 2.0);
    RealSamples u(w.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = 2.0 * std::exp(-0.5 * grid->nodes()[j] * grid->nodes()[j]);
    // Petviashvili: u <- M(u)^gamma (W + K)^{-1} W u^{q-1}, M = <u,(W+K)u> / <u, W u^{q-1}>.
    for (int it = 0; it < 2000; ++it) {
        const RealSamples ku = k.apply(u);
        RealSamples nl(u.size());
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            nl[j] = w[j] * std::pow(std::abs(u[j]), q - 2.0) * u[j];
            num += u[j] * (w[j] * u[j] + ku[j]);
            den += u[j] * nl[j];
        }
        const double m = std::pow(num / den, gamma);
        solver.solve_in_place(nl);
        double change = 0.0, size = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double next = m * nl[j];
            change = std::max(change, std::abs(next - u[j]));
            size = std::max(size, std::abs(next));
            u[j] = next;
        }
        if (change <= 1e-14 * size) break;
    }
    ComplexSamples v(u.begin(), u.end());
    return RadialField(grid, std::move(v), "gn_ground_state");
}

double recorded_constant(const InequalityCase& c, const GridPtr& grid) {
    const Exponents& x = c.exponents;
    switch (c.kind) {
        case InequalityKind::GN:
        case InequalityKind::MGN: {
            if (x.q == 2.0) return 1.0;
            InequalityCase gn = c;
            gn.kind = InequalityKind::GN;
            return empirical_ratio(gn, gn_ground_state(grid, x.q));
        }
        case InequalityKind::Strauss:
            return 1.0 / std::sqrt(2.0 * std::numbers::pi);
        case InequalityKind::diamagnetic:
            return 1.0;
        case InequalityKind::atheta_weighted:
            // |A_theta(r)| <= (1/4 pi) int_{|x|<r} |u|^2 <= (1/4 pi) ||u||_s^2 (pi r^2)^{1-2/s}
            if (std::isinf(x.q)) return std::pow(std::numbers::pi, -2.0 * inv(x.s)) / 4.0;
            return kNaN;
        case InequalityKind::azero_weighted:
            // r^2 A_0(r) <= int_r^inf rho |A_theta| |u|^2 d rho <= M^2 / (8 pi^2)
            if (std::isinf(x.q) && x.a == -2.0 && x.s1 == 2.0 && x.s2 == 2.0)
                return 1.0 / (8.0 * std::numbers::pi * std::numbers::pi);
            return kNaN;
        case InequalityKind::cor_a01:
            return kNaN;
    }
    return kNaN;
}

RadialField sample_field(const GridPtr& grid, const FieldFamily& f, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, std::max(1, f.max_components));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const int m = count(rng);
    std::vector<Complex> amp;
    std::vector<double> width, center, chirp;
    for (int i = 0; i < m; ++i) {
        const double mag = between(f.amplitude_min, f.amplitude_max);
        const double phase = f.complex_amplitudes ? between(0.0, 2.0 * std::numbers::pi) : 0.0;
        amp.push_back(std::polar(mag, phase));
        width.push_back(between(f.width_min, f.width_max));
        center.push_back(between(0.0, f.center_max));
        chirp.push_back(between(-f.chirp_max, f.chirp_max));
    }
    return RadialField::sample(grid, [&](double r) {
        Complex v{};
        for (int i = 0; i < m; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double z = (r - center[k]) / width[k];
            v += amp[k] * std::exp(Complex(-0.5 * z * z, chirp[k] * r * r));
        }
        return v;
    }, "family_sample");
}

SweepReport sweep_report(const InequalityCase& c, const GridPtr& grid, int n_fields, std::uint64_t seed,
                         const std::vector<double>& dilations) {
    require(n_fields >= 1, "sweep_report: N must be >= 1");
    std::string why;
    require(admissible(c, &why), "sweep_report: inadmissible exponents: " + why);
    SweepReport rep;
    rep.c = c;
    rep.n_fields = n_fields;
    rep.constant = recorded_constant(c, grid);

    auto run = [&](std::uint64_t s, std::vector<RadialField>* keep) {
        std::mt19937_64 rng(s);
        std::vector<double> ratios;
        for (int i = 0; i < n_fields; ++i) {
            RadialField u = sample_field(grid, c.family, rng);
            ratios.push_back(empirical_ratio(c, u));
            if (keep && static_cast<int>(keep->size()) < 10) keep->push_back(std::move(u));
        }
        return ratios;
    };
    std::vector<RadialField> kept;
    const std::vector<double> ratios = run(seed, &kept);
    const std::vector<double> second = run(seed + 1, nullptr);

    rep.max_ratio = *std::max_element(ratios.begin(), ratios.end());
    rep.max_ratio_second_seed = *std::max_element(second.begin(), second.end());
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    rep.median_ratio = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    const double lo = std::min(rep.max_ratio, rep.max_ratio_second_seed);
    const double hi = std::max(rep.max_ratio, rep.max_ratio_second_seed);
    rep.seed_stable = lo > 0.0 && std::isfinite(hi) && hi <= 2.0 * lo;
    if (std::isfinite(rep.constant)) {
        for (const std::vector<double>* set : {&ratios, &second})
            for (double r : *set)
                if (!(r <= rep.constant * (1.0 + 1e-6))) ++rep.violations;
    } else {
        for (const std::vector<double>* set : {&ratios, &second})
            for (double r : *set)
                if (!std::isfinite(r)) ++rep.violations;
    }
    if (scale_invariant(c) && !dilations.empty()) {
        double spread = 0.0;
        for (const RadialField& u : kept) {
            double rmin = kInf, rmax = 0.0;
            for (double lambda : dilations) {
                // u(r / lambda), up to an amplitude factor the ratio ignores.
                const double r = empirical_ratio(c, scale_field(u, 1.0 / lambda));
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
            spread = std::max(spread, (rmax - rmin) / rmin);
        }
        rep.dilation_spread = spread;
    }
    return rep;
}

std::string SweepReport::to_json() const {
    nlohmann::ordered_json j;
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
    j["case"] = to_string(c.kind);
    j["label"] = c.label;
    nlohmann::ordered_json e;
    e["q"] = num(c.exponents.q);
    e["s"] = num(c.exponents.s);
    e["b"] = c.exponents.b;
    e["a"] = c.exponents.a;
    e["s1"] = num(c.exponents.s1);
    e["s2"] = num(c.exponents.s2);
    j["exponents"] = e;
    j["N"] = n_fields;
    j["max_ratio"] = max_ratio;
    j["median_ratio"] = median_ratio;
    j["max_ratio_second_seed"] = max_ratio_second_seed;
    j["seed_stable"] = seed_stable;
    j["constant"] = num(constant);
    j["violations"] = violations;
    j["dilation_spread"] = num(dilation_spread);
    return j.dump();
}

std::vector<InequalityCase> default_cases(double p) {
    const double inf = kInf;
    auto make = [](InequalityKind k, Exponents e, std::string label) {
        InequalityCase c;
        c.kind = k;
        c.exponents = e;
        c.label = std::move(label);
        return c;
    };
    std::vector<InequalityCase> cases;
    cases.push_back(make(InequalityKind::GN, {.q = p + 1.0}, "GN q=p+1"));
    cases.push_back(make(InequalityKind::GN, {.q = 4.0}, "GN q=4"));
    cases.push_back(make(InequalityKind::MGN, {.q = p + 1.0}, "MGN q=p+1"));
    cases.push_back(make(InequalityKind::Strauss, {}, "Strauss"));
    cases.push_back(make(InequalityKind::diamagnetic, {}, "diamagnetic"));
    cases.push_back(make(InequalityKind::atheta_weighted, {.q = inf, .s = 2.0, .b = 0.0}, "atheta b=0 q=inf s=2"));
    cases.push_back(make(InequalityKind::atheta_weighted, {.q = inf, .s = 4.0, .b = 1.0}, "atheta b=1 q=inf s=4"));
    cases.push_back(make(InequalityKind::atheta_weighted, {.q = 4.0, .s = 8.0 / 3.0, .b = 1.0}, "atheta b=1 q=4 s=8/3"));
    cases.push_back(make(InequalityKind::azero_weighted, {.q = inf, .b = 0.0, .a = -2.0, .s1 = 2.0, .s2 = 2.0},
                         "azero q=inf a=-2 s1=s2=2"));
    cases.push_back(make(InequalityKind::azero_weighted, {.q = 4.0, .b = 0.25, .a = 0.0, .s1 = 4.0, .s2 = 4.0},
                         "azero q=4 a=0 b=1/4 s1=s2=4"));
    cases.push_back(make(InequalityKind::azero_weighted, {.q = inf, .b = 0.75, .a = -1.0, .s1 = 4.0, .s2 = 8.0},
                         "azero q=inf a=-1 b=3/4 s1=4 s2=8"));
    cases.push_back(make(InequalityKind::cor_a01, {.q = inf, .a = 0.0}, "cor_a01 q=inf a=0"));
    cases.push_back(make(InequalityKind::cor_a01, {.q = 2.0, .a = 0.5}, "cor_a01 q=2 a=1/2"));
    return cases;
}

}  // namespace css
