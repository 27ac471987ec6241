/// @file inequalities.hpp
/// @brief Empirical verification harness for the functional inequalities.
///
/// Each case is a ratio LHS/RHS evaluated with the grid quadrature:
///   GN           ||u||_q / (||grad u||_2^alpha ||u||_2^{1-alpha}),  alpha = 1 - 2/q
///   MGN          same with ||D u||_2^2 = ||grad u||_2^2 + Q in place of ||grad u||_2^2
///   Strauss      sup r^{1/2} |u| / ||u||_{H^1}
///   diamagnetic  ||grad |u| ||_2^2 / ||D u||_2^2
///   atheta_weighted  || A_theta(|u|^2) / |x|^b ||_{L^q} / ||u||_{L^s}^2
///   azero_weighted   || A_0(|u|^2) / |x|^a ||_{L^q} / (||u||_{L^{s1}}^2 || |x|^b u ||_{L^{s2}}^2)
///   cor_a01          || A_0(|u|^2) / |x|^a ||_{L^q} / ||u||_{H^1}^4
/// Singular weights are evaluated away from the origin; the origin cell uses
/// the analytic small-r behaviour (A_theta ~ -|u(0)|^2 r^2 / 4, A_0 ~ A_0(0)).
#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "css/radial_core.hpp"

namespace css {

enum class InequalityKind { GN, MGN, Strauss, diamagnetic, atheta_weighted, azero_weighted, cor_a01 };

std::string to_string(InequalityKind k);
InequalityKind inequality_kind_from_string(const std::string& s);

/// Exponent tuple; entries irrelevant to a case are ignored.  +inf allowed.
struct Exponents {
    double q = 2.0;
    double s = 2.0;
    double b = 0.0;
    double a = 0.0;
    double s1 = 2.0;
    double s2 = 2.0;
};

/// Randomised Gaussian-mixture family
///   u(r) = sum_k c_k exp(-(r - m_k)^2 / (2 w_k^2)) exp(i beta_k r^2).
struct FieldFamily {
    int max_components = 3;
    double amplitude_min = 0.2, amplitude_max = 2.0;
    double width_min = 0.3, width_max = 3.0;
    double center_max = 3.0;
    double chirp_max = 0.5;
    bool complex_amplitudes = true;
};

struct InequalityCase {
    InequalityKind kind = InequalityKind::GN;
    Exponents exponents;
    FieldFamily family;
    std::string label;  ///< free-form name used in reports
};

/// True when the exponents lie in the admissible region of the case; @p why
/// receives the reason otherwise.  Edges of the open conditions are excluded.
bool admissible(const InequalityCase& c, std::string* why = nullptr);

/// True when the ratio is invariant under u(r) -> u(r / lambda).
bool scale_invariant(const InequalityCase& c);

/// LHS/RHS.  ContractViolation if inadmissible or u is zero; DomainError if RHS = 0.
double empirical_ratio(const InequalityCase& c, const RadialField& u);

/// Proven constant for the case on this grid, or NaN when only empirical
/// statements are available.  GN/MGN use the discrete ground state of
/// -Lap Q + Q = Q^{q-1} (whose ratio is the sharp discrete constant).
double recorded_constant(const InequalityCase& c, const GridPtr& grid);

/// One draw from the family.
RadialField sample_field(const GridPtr& grid, const FieldFamily& family, std::mt19937_64& rng);

/// Sweep summary of one case.
struct SweepReport {
    InequalityCase c;
    int n_fields = 0;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    double max_ratio_second_seed = 0.0;
    bool seed_stable = false;          ///< max ratios of two seeds within a factor 2
    double constant = std::numeric_limits<double>::quiet_NaN();
    int violations = 0;                ///< ratios above constant (1 + 1e-6)
    double dilation_spread = std::numeric_limits<double>::quiet_NaN();  ///< (max-min)/min over lambda ladder

    std::string to_json() const;
};

/// N fields per seed (seed and seed + 1); dilation ladder applied to the
/// first min(N, 10) fields for scale-invariant cases.
SweepReport sweep_report(const InequalityCase& c, const GridPtr& grid, int n_fields, std::uint64_t seed,
                         const std::vector<double>& dilations = {0.5, 1.0, 2.0});

/// The case list used by the acceptance run, for exponent p.
std::vector<InequalityCase> default_cases(double p);

/// Sharp discrete GN maximiser for exponent q (Petviashvili iteration).
RadialField gn_ground_state(const GridPtr& grid, double q);

}  // namespace css
