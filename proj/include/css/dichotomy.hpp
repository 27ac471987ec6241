/// @file dichotomy.hpp
/// @brief Threshold classification, virial and Morawetz monitors, scattering test.
#pragma once

#include <string>
#include <vector>

#include "css/cutoff.hpp"
#include "css/evolution.hpp"

namespace css {

/// Position of initial data relative to the threshold d.
enum class SetLabel { K_plus, K_minus, above_threshold, on_boundary };

std::string to_string(SetLabel label);

struct ClassificationResult {
    double s_value = 0.0;
    double k_value = 0.0;
    double d_reference = 0.0;
    SetLabel set_label = SetLabel::on_boundary;
    double margin = 0.0;  ///< min((d - S)/d, |K|/D); negative above threshold

    std::string to_json() const;
};

/// Labels u0: K_plus iff S < d and K > 0, K_minus iff S < d and K < 0,
/// on_boundary when |K| <= 1e-10 max(D, 1) or |d - S| <= 1e-10 d,
/// above_threshold otherwise.
ClassificationResult classify(const RadialField& u0, double p, double d_reference);

/// Finite-difference dV/dt against 2K along a log.
struct VirialRateReport {
    double big_r = 0.0;
    double sigma = 0.0;             ///< min(2, (p-1)/2)
    std::vector<double> times;      ///< midpoints of consecutive log samples
    std::vector<double> dv_dt;
    std::vector<double> two_k;      ///< 2K interpolated at the midpoints
    double max_deviation = 0.0;     ///< max |dV/dt - 2K|
    double scale = 0.0;             ///< max |2K|
    double fitted_c = 0.0;          ///< max_deviation R^sigma
    double final_dv_dt = 0.0;

    std::string to_json() const;
};

/// Requires >= 3 logged samples (DomainError otherwise).
VirialRateReport virial_rate_check(const TrajectoryLog& log);

/// Morawetz ratios accumulator(T)/T^alpha on a ladder of horizons.
struct MorawetzReport {
    double alpha = 0.0;
    std::vector<double> horizons;
    std::vector<double> accumulator;   ///< total of the three accumulators
    std::vector<double> ratio;         ///< accumulator / T^alpha
    std::vector<double> identity_error;///< |acc_A0 - 2 acc_Q| / max(acc_A0, tiny)
    double max_min_ratio = 0.0;
    double max_identity_error = 0.0;
    bool bounded = false;              ///< max/min < 10

    std::string to_json() const;
    /// T,accumulator,ratio rows.
    std::string to_csv() const;
};

/// Requires a completed run whose log hits every horizon (DomainError otherwise).
MorawetzReport morawetz_check(const TrajectoryLog& log, double p, const std::vector<double>& horizons);

/// Cauchy test on w(t) = e^{-i t Lap} u(t).
struct ScatteringReport {
    std::vector<double> checkpoints;
    std::vector<double> increments;    ///< ||w(t_{k+1}) - w(t_k)||_{H^1}
    double initial_h1 = 0.0;
    double final_increment = 0.0;
    bool decreasing = false;           ///< strictly decreasing over the last 5 checkpoints
    bool scattered = false;            ///< decreasing and final < 1e-3 ||u0||_{H^1}

    std::string to_json() const;
};

/// Uses the snapshots kept by propagate; refuses logs that did not complete.
ScatteringReport scattering_monitor(const TrajectoryLog& log, double dt);

/// Same from explicit snapshots (times ascending, first is the initial datum).
ScatteringReport scattering_monitor(const std::vector<double>& times, const std::vector<RadialField>& snapshots,
                                    double dt);

}  // namespace css
