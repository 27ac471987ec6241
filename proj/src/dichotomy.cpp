/// @file dichotomy.cpp
/// @brief Classification against d, virial/Morawetz monitors and the scattering test.
#include "css/dichotomy.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace css {

std::string to_string(SetLabel label) {
    switch (label) {
        case SetLabel::K_plus: return "K_plus";
        case SetLabel::K_minus: return "K_minus";
        case SetLabel::above_threshold: return "above_threshold";
        case SetLabel::on_boundary: return "on_boundary";
    }
    return "on_boundary";
}

ClassificationResult classify(const RadialField& u0, double p, double d_reference) {
    require(std::isfinite(d_reference) && d_reference > 0.0, "classify: d_reference must be positive");
    const FunctionalReport rep = report(u0, p);
    ClassificationResult c;
    c.s_value = rep.action;
    c.k_value = rep.nehari;
    c.d_reference = d_reference;
    const double d_scale = std::max(rep.covariant_kinetic(), 1.0);
    const bool k_flat = std::abs(rep.nehari) <= 1e-10 * d_scale;
    const bool s_flat = std::abs(d_reference - rep.action) <= 1e-10 * d_reference;
    if (k_flat || s_flat) c.set_label = SetLabel::on_boundary;
    else if (rep.action > d_reference) c.set_label = SetLabel::above_threshold;
    else c.set_label = rep.nehari > 0.0 ? SetLabel::K_plus : SetLabel::K_minus;
    c.margin = std::min((d_reference - rep.action) / d_reference, std::abs(rep.nehari) / d_scale);
    return c;
}

std::string ClassificationResult::to_json() const {
    nlohmann::ordered_json j;
    j["s_value"] = s_value;
    j["k_value"] = k_value;
    j["d_reference"] = d_reference;
    j["set_label"] = to_string(set_label);
    j["margin"] = margin;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Virial rate
// ---------------------------------------------------------------------------

VirialRateReport virial_rate_check(const TrajectoryLog& log) {
    if (log.size() < 3) throw DomainError("virial_rate_check: log needs at least 3 samples");
    VirialRateReport r;
    r.big_r = log.virial_radius;
    r.sigma = std::min(2.0, 0.5 * (log.p - 1.0));
    for (std::size_t i = 0; i + 1 < log.size(); ++i) {
        const double dt = log.times[i + 1] - log.times[i];
        if (!(dt > 0.0)) continue;
        const double rate = (log.virial[i + 1] - log.virial[i]) / dt;
        const double two_k = log.reports[i].nehari + log.reports[i + 1].nehari;  // 2 * mean K
        r.times.push_back(0.5 * (log.times[i] + log.times[i + 1]));
        r.dv_dt.push_back(rate);
        r.two_k.push_back(two_k);
        r.max_deviation = std::max(r.max_deviation, std::abs(rate - two_k));
        r.scale = std::max(r.scale, std::abs(two_k));
    }
    r.fitted_c = r.max_deviation * std::pow(r.big_r, r.sigma);
    r.final_dv_dt = r.dv_dt.empty() ? 0.0 : r.dv_dt.back();
    return r;
}

std::string VirialRateReport::to_json() const {
    nlohmann::ordered_json j;
    j["big_r"] = big_r;
    j["sigma"] = sigma;
    j["samples"] = times.size();
    j["max_deviation"] = max_deviation;
    j["scale"] = scale;
    j["fitted_c"] = fitted_c;
    j["final_dv_dt"] = final_dv_dt;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Morawetz
// ---------------------------------------------------------------------------

MorawetzReport morawetz_check(const TrajectoryLog& log, double p, const std::vector<double>& horizons) {
    require_supercritical(p);
    if (log.termination != Termination::completed) throw DomainError("morawetz_check: run did not complete");
    require(!horizons.empty(), "morawetz_check: empty horizon ladder");
    MorawetzReport r;
    const double sigma = std::min(2.0, 0.5 * (p - 1.0));
    r.alpha = 1.0 / (1.0 + sigma);
    for (double t : horizons) {
        require(t > 0.0, "morawetz_check: horizons must be positive");
        std::size_t idx = log.size();
        for (std::size_t i = 0; i < log.size(); ++i)
            if (std::abs(log.times[i] - t) <= 1e-9 * std::max(1.0, t)) idx = i;
        if (idx == log.size()) throw DomainError("morawetz_check: horizon not on the logged time grid");
        const MorawetzAccumulators& a = log.morawetz[idx];
        r.horizons.push_back(t);
        r.accumulator.push_back(a.total());
        r.ratio.push_back(a.total() / std::pow(t, r.alpha));
        const double err = a.a_zero > 0.0 ? std::abs(a.a_zero - 2.0 * a.q_charge) / a.a_zero : 0.0;
        r.identity_error.push_back(err);
        r.max_identity_error = std::max(r.max_identity_error, err);
    }
    const auto [lo, hi] = std::minmax_element(r.ratio.begin(), r.ratio.end());
    r.max_min_ratio = *lo > 0.0 ? *hi / *lo : (*hi > 0.0 ? INFINITY : 1.0);
    r.bounded = std::isfinite(r.max_min_ratio) && r.max_min_ratio < 10.0;
    return r;
}

std::string MorawetzReport::to_json() const {
    nlohmann::ordered_json j;
    j["alpha"] = alpha;
    j["horizons"] = horizons;
    j["accumulator"] = accumulator;
    j["ratio"] = ratio;
    j["identity_error"] = identity_error;
    j["max_min_ratio"] = max_min_ratio;
    j["max_identity_error"] = max_identity_error;
    j["bounded"] = bounded;
    return j.dump(2);
}

std::string MorawetzReport::to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17) << "T,accumulator,ratio\n";
    for (std::size_t i = 0; i < horizons.size(); ++i) os << horizons[i] << ',' << accumulator[i] << ',' << ratio[i] << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Scattering
// ---------------------------------------------------------------------------

ScatteringReport scattering_monitor(const TrajectoryLog& log, double dt) {
    if (log.termination != Termination::completed)
        throw DomainError("scattering_monitor: run terminated by " + to_string(log.termination));
    return scattering_monitor(log.snapshot_times, log.snapshots, dt);
}

ScatteringReport scattering_monitor(const std::vector<double>& times, const std::vector<RadialField>& snapshots,
                                    double dt) {
    require(times.size() == snapshots.size(), "scattering_monitor: times/snapshots length mismatch");
    require(times.size() >= 2, "scattering_monitor: need at least two checkpoints");
    require(times.front() == 0.0, "scattering_monitor: first checkpoint must be t = 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        require(times[i] > times[i - 1], "scattering_monitor: checkpoints must increase");
    ScatteringReport r;
    r.checkpoints = times;
    r.initial_h1 = h1_norm(snapshots.front());
    RadialField prev = snapshots.front();
    for (std::size_t i = 1; i < times.size(); ++i) {
        require_same_grid(snapshots[i], snapshots.front());
        RadialField w = free_propagate(snapshots[i], -times[i], dt);
        RadialField diff = w;
        for (std::size_t j = 0; j < diff.size(); ++j) diff.values[j] -= prev.values[j];
        r.increments.push_back(h1_norm(diff));
        prev = std::move(w);
    }
    r.final_increment = r.increments.back();
    // The last five checkpoints carry the last four increments.
    if (times.size() >= 5) {
        r.decreasing = true;
        for (std::size_t i = r.increments.size() - 3; i < r.increments.size(); ++i)
            if (!(r.increments[i] < r.increments[i - 1])) r.decreasing = false;
    }
    r.scattered = r.decreasing && r.final_increment < 1e-3 * r.initial_h1;
    return r;
}

std::string ScatteringReport::to_json() const {
    nlohmann::ordered_json j;
    j["checkpoints"] = checkpoints;
    j["increments"] = increments;
    j["initial_h1"] = initial_h1;
    j["final_increment"] = final_increment;
    j["decreasing"] = decreasing;
    j["scattered"] = scattered;
    return j.dump(2);
}

}  // namespace css
