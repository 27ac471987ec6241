/// @file runner.cpp
/// @brief Manifest parsing/validation, presets, and the per-kind experiment drivers.
#include "css/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "css/dichotomy.hpp"
#include "css/evolution.hpp"
#include "css/functionals.hpp"
#include "css/ground_state.hpp"
#include "css/inequalities.hpp"

namespace css {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kMaxNodes = 1 << 20;

// ---------------------------------------------------------------------------
// Strict object reader
// ---------------------------------------------------------------------------

/// View of one JSON object whose key set must equal @p keys exactly.
class Fields {
public:
    Fields(const Json& obj, std::string path, const std::vector<std::string>& keys) : obj_(obj), path_(std::move(path)) {
        if (!obj.is_object()) throw UsageError(path_ + ": expected an object");
        for (const auto& item : obj.items())
            if (std::find(keys.begin(), keys.end(), item.key()) == keys.end())
                throw UsageError(where(item.key()) + ": unknown key");
        for (const std::string& k : keys)
            if (!obj.contains(k)) throw UsageError(where(k) + ": missing");
    }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const Json& at(const std::string& key) const { return obj_.at(key); }

    double number(const std::string& key) const {
        const Json& v = obj_.at(key);
        if (!v.is_number()) throw UsageError(where(key) + ": expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw UsageError(where(key) + ": must be finite");
        return x;
    }

    /// Number or the string "inf".
    double extended(const std::string& key) const {
        const Json& v = obj_.at(key);
        if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        if (!v.is_number()) throw UsageError(where(key) + ": expected a number or \"inf\"");
        return v.get<double>();
    }

    double positive(const std::string& key) const {
        const double x = number(key);
        if (!(x > 0.0)) throw UsageError(where(key) + ": must be > 0");
        return x;
    }

    long integer(const std::string& key, long lo, long hi) const {
        const Json& v = obj_.at(key);
        if (!v.is_number_integer()) throw UsageError(where(key) + ": expected an integer");
        const long x = v.get<long>();
        if (x < lo || x > hi)
            throw UsageError(where(key) + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return x;
    }

    bool boolean(const std::string& key) const {
        const Json& v = obj_.at(key);
        if (!v.is_boolean()) throw UsageError(where(key) + ": expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) const {
        const Json& v = obj_.at(key);
        if (!v.is_string()) throw UsageError(where(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) const {
        const Json& v = obj_.at(key);
        if (!v.is_array()) throw UsageError(where(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
                throw UsageError(where(key) + "[" + std::to_string(i) + "]: expected a finite number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

private:
    const Json& obj_;
    std::string path_;
};

/// Re-throws contract violations raised while building typed configs as
/// usage errors carrying the same field-level message.
template <class F>
auto as_usage(F&& f) {
    try {
        return f();
    } catch (const ContractViolation& e) {
        throw UsageError(e.what());
    }
}

/// Accepts any JSON integer >= 0 (signed or unsigned storage).
std::uint64_t seed_value(const Json& v, const std::string& name) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw UsageError(name + ": expected a non-negative integer");
}

// ---------------------------------------------------------------------------
// Typed per-kind specifications
// ---------------------------------------------------------------------------

struct InitialData {
    double amplitude = 1.0, width = 1.0, chirp = 0.0;
};

InitialData parse_initial(const Fields& f, const std::string& key) {
    const Fields g(f.at(key), f.where(key), {"amplitude", "width", "chirp"});
    InitialData d;
    d.amplitude = g.number("amplitude");
    if (!(d.amplitude > 0.0)) throw UsageError(g.where("amplitude") + ": must be > 0 (zero field has no dynamics to classify)");
    d.width = g.positive("width");
    d.chirp = g.number("chirp");
    return d;
}

double parse_p(const Fields& f) {
    const double p = f.number("p");
    if (!(p > 3.0)) throw UsageError(f.where("p") + ": must satisfy p > 3");
    return p;
}

struct SimulatePlan {
    SimConfig sim;
    InitialData init;
    std::vector<double> horizons;  // scatter_check only
};

SimulatePlan parse_simulate(const Json& cfg, bool scatter) {
    std::vector<std::string> keys = {"p",        "n",           "r_max",      "dt",
                                     "t_end",    "initial",     "nonlinear",  "log_stride",
                                     "virial_radius", "snapshot_times", "blowup_gradient_factor",
                                     "boundary_mass_tol"};
    if (scatter) keys.push_back("horizons");
    const Fields f(cfg, "config", keys);
    SimulatePlan s;
    s.sim.p = parse_p(f);
    s.sim.n = static_cast<int>(f.integer("n", RadialGrid::kMinNodes, kMaxNodes));
    s.sim.r_max = f.positive("r_max");
    s.sim.dt = f.positive("dt");
    s.sim.t_end = f.positive("t_end");
    s.init = parse_initial(f, "initial");
    s.sim.nonlinear_on = f.boolean("nonlinear");
    s.sim.log_stride = static_cast<int>(f.integer("log_stride", 1, 1 << 30));
    s.sim.virial_radius = f.number("virial_radius");
    s.sim.snapshot_times = f.numbers("snapshot_times");
    s.sim.blowup_gradient_factor = f.number("blowup_gradient_factor");
    s.sim.boundary_mass_tol = f.number("boundary_mass_tol");
    as_usage([&] {
        s.sim.validate();
        return 0;
    });
    if (scatter) {
        s.horizons = f.numbers("horizons");
        if (s.horizons.empty()) throw UsageError("config.horizons: must not be empty");
        if (s.sim.snapshot_times.size() < 2)
            throw UsageError("config.snapshot_times: scatter_check needs at least two checkpoints");
        for (std::size_t i = 0; i < s.horizons.size(); ++i) {
            const std::string at = "config.horizons[" + std::to_string(i) + "]";
            const double t = s.horizons[i];
            if (!(t > 0.0 && t <= s.sim.t_end * (1.0 + 1e-12))) throw UsageError(at + ": must lie in (0, t_end]");
            const long k = as_usage([&] { return step_count(t, s.sim.dt); });
            if (k % s.sim.log_stride != 0 && k != s.sim.steps())
                throw UsageError(at + ": must be a logged time (multiple of dt * log_stride)");
        }
    }
    return s;
}

struct GroundPlan {
    double p = 5.0;
    int n = 1024;
    double r_max = 32.0;
    DescentConfig descent;
    int refine_n = 0;
};

GroundPlan parse_ground(const Json& cfg, std::uint64_t seed) {
    const Fields f(cfg, "config", {"p", "n", "r_max", "starts", "gaussians", "max_iterations", "refine_n"});
    GroundPlan g;
    g.p = parse_p(f);
    g.n = static_cast<int>(f.integer("n", RadialGrid::kMinNodes, kMaxNodes));
    g.r_max = f.positive("r_max");
    g.descent.starts = static_cast<int>(f.integer("starts", 1, 64));
    g.descent.gaussians = static_cast<int>(f.integer("gaussians", 3, 6));
    g.descent.max_iterations = static_cast<int>(f.integer("max_iterations", 1, 10000000));
    g.descent.seed = seed;
    g.refine_n = static_cast<int>(f.integer("refine_n", 0, kMaxNodes));
    if (g.refine_n != 0 && g.refine_n < RadialGrid::kMinNodes)
        throw UsageError("config.refine_n: must be 0 or >= " + std::to_string(RadialGrid::kMinNodes));
    as_usage([&] {
        g.descent.validate();
        return 0;
    });
    return g;
}

struct ReferencePlan {
    double d_reference = 0.0;  // <= 0: compute
    int gs_n = 1024;
    double gs_r_max = 32.0;
};

ReferencePlan parse_reference(const Fields& f) {
    ReferencePlan r;
    r.d_reference = f.number("d_reference");
    const Fields g(f.at("ground_state"), f.where("ground_state"), {"n", "r_max"});
    r.gs_n = static_cast<int>(g.integer("n", RadialGrid::kMinNodes, kMaxNodes));
    r.gs_r_max = g.positive("r_max");
    return r;
}

struct ClassifyPlan {
    double p = 5.0;
    int n = 4096;
    double r_max = 32.0;
    InitialData init;
    ReferencePlan ref;
};

ClassifyPlan parse_classify(const Json& cfg) {
    const Fields f(cfg, "config", {"p", "n", "r_max", "initial", "d_reference", "ground_state"});
    ClassifyPlan c;
    c.p = parse_p(f);
    c.n = static_cast<int>(f.integer("n", RadialGrid::kMinNodes, kMaxNodes));
    c.r_max = f.positive("r_max");
    c.init = parse_initial(f, "initial");
    c.ref = parse_reference(f);
    return c;
}

struct DichotomyPlan {
    SimConfig sim;
    double width = 1.0;
    std::vector<double> amplitudes;
    ReferencePlan ref;
};

DichotomyPlan parse_dichotomy(const Json& cfg) {
    const Fields f(cfg, "config",
                   {"p", "n", "r_max", "dt", "t_end", "width", "amplitudes", "log_stride", "d_reference", "ground_state"});
    DichotomyPlan d;
    d.sim.p = parse_p(f);
    d.sim.n = static_cast<int>(f.integer("n", RadialGrid::kMinNodes, kMaxNodes));
    d.sim.r_max = f.positive("r_max");
    d.sim.dt = f.positive("dt");
    d.sim.t_end = f.positive("t_end");
    d.sim.log_stride = static_cast<int>(f.integer("log_stride", 1, 1 << 30));
    d.width = f.positive("width");
    d.amplitudes = f.numbers("amplitudes");
    if (d.amplitudes.empty()) throw UsageError("config.amplitudes: must not be empty");
    for (std::size_t i = 0; i < d.amplitudes.size(); ++i)
        if (!(d.amplitudes[i] > 0.0))
            throw UsageError("config.amplitudes[" + std::to_string(i) + "]: must be > 0 (zero field rejected)");
    d.ref = parse_reference(f);
    as_usage([&] {
        d.sim.validate();
        return 0;
    });
    return d;
}

struct InequalityPlan {
    double p = 5.0;
    int n = 4096;
    double r_max = 64.0;
    int fields_per_case = 100;
    std::vector<InequalityCase> cases;
};

InequalityPlan parse_inequalities(const Json& cfg) {
    const Fields f(cfg, "config", {"p", "n", "r_max", "fields_per_case", "cases"});
    InequalityPlan s;
    s.p = parse_p(f);
    s.n = static_cast<int>(f.integer("n", RadialGrid::kMinNodes, kMaxNodes));
    s.r_max = f.positive("r_max");
    s.fields_per_case = static_cast<int>(f.integer("fields_per_case", 1, 1000000));
    const Json& cases = f.at("cases");
    if (!cases.is_array()) throw UsageError("config.cases: expected an array (empty selects the default list)");
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const std::string at = "config.cases[" + std::to_string(i) + "]";
        const Fields c(cases[i], at, {"kind", "label", "q", "s", "b", "a", "s1", "s2"});
        InequalityCase ic;
        ic.kind = inequality_kind_from_string(c.string("kind"));
        ic.label = c.string("label");
        ic.exponents = {c.extended("q"), c.extended("s"), c.number("b"), c.number("a"), c.extended("s1"),
                        c.extended("s2")};
        std::string why;
        if (!admissible(ic, &why)) throw UsageError(at + ": inadmissible exponents: " + why);
        s.cases.push_back(ic);
    }
    if (s.cases.empty()) s.cases = default_cases(s.p);
    return s;
}

// ---------------------------------------------------------------------------
// Artifacts
// ---------------------------------------------------------------------------

class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& content) {
        const fs::path target = dir_ / name;
        const fs::path tmp = dir_ / (name + ".tmp");
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            if (!os) throw IoError("cannot open '" + tmp.string() + "' for writing");
            os << content;
            os.flush();
            if (!os) throw IoError("write to '" + tmp.string() + "' failed");
        }
        std::error_code ec;
        fs::rename(tmp, target, ec);
        if (ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
        if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
    }

    const std::vector<std::string>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

fs::path prepare_output(const ExperimentManifest& m) {
    const fs::path dir(m.output_dir);
    std::error_code ec;
    if (fs::exists(dir, ec)) {
        if (!fs::is_directory(dir, ec)) throw IoError("output_dir '" + m.output_dir + "' is not a directory");
        if (!fs::is_empty(dir, ec)) {
            std::ifstream in(dir / "manifest.json");
            std::stringstream ss;
            ss << in.rdbuf();
            if (!in || ss.str() != m.dump())
                throw UsageError("output_dir: '" + m.output_dir + "' is not empty and belongs to another experiment");
        }
    } else {
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output_dir '" + m.output_dir + "': " + ec.message());
    }
    return dir;
}

Json parse_json(const std::string& s) { return Json::parse(s); }

std::string csv_number(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

class Stopwatch {
public:
    void lap(const std::string& phase) {
        const auto now = std::chrono::steady_clock::now();
        timing_[phase] = std::chrono::duration<double>(now - last_).count();
        last_ = now;
    }
    std::string json() const { return timing_.dump(2); }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    Json timing_ = Json::object();
};

// ---------------------------------------------------------------------------
// Ground-state cache
// ---------------------------------------------------------------------------

double cached_d(double p, int n, double r_max) {
    static std::mutex mu;
    static std::map<std::tuple<double, int, double>, double> cache;
    const auto key = std::make_tuple(p, n, r_max);
    {
        const std::lock_guard<std::mutex> lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const double d = minimize_d(p, RadialGrid::create(n, r_max)).d_value;
    const std::lock_guard<std::mutex> lock(mu);
    cache[key] = d;
    return d;
}

double reference_d(double p, const ReferencePlan& ref) {
    return ref.d_reference > 0.0 ? ref.d_reference : cached_d(p, ref.gs_n, ref.gs_r_max);
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

double max_relative_drift(const TrajectoryLog& log, double FunctionalReport::*member) {
    const double base = log.reports.front().*member;
    double worst = 0.0;
    for (const FunctionalReport& r : log.reports) worst = std::max(worst, std::abs(r.*member - base));
    return worst / std::max(std::abs(base), std::numeric_limits<double>::min());
}

std::string grad_plot(const TrajectoryLog& log) {
    std::ostringstream os;
    os << std::setprecision(17) << "t,grad_norm,K\n";
    for (std::size_t i = 0; i < log.size(); ++i) os << log.times[i] << ',' << log.grad_norm[i] << ',' << log.reports[i].nehari << '\n';
    return os.str();
}

std::string virial_plot(const TrajectoryLog& log) {
    std::ostringstream os;
    os << std::setprecision(17) << "t,virial,two_K\n";
    for (std::size_t i = 0; i < log.size(); ++i) os << log.times[i] << ',' << log.virial[i] << ',' << 2.0 * log.reports[i].nehari << '\n';
    return os.str();
}

Json trajectory_summary(const TrajectoryLog& log) {
    Json j;
    j["termination"] = to_string(log.termination);
    j["termination_time"] = log.termination_time;
    j["logged_samples"] = log.size();
    j["mass_drift_relative"] = max_relative_drift(log, &FunctionalReport::mass);
    j["energy_drift_relative"] = max_relative_drift(log, &FunctionalReport::energy);
    double k_min = std::numeric_limits<double>::infinity();
    for (const FunctionalReport& r : log.reports) k_min = std::min(k_min, r.nehari);
    j["k_min"] = k_min;
    j["initial"] = parse_json(to_json(log.reports.front()));
    j["final"] = parse_json(to_json(log.reports.back()));
    return j;
}

RunOutcome run_simulate(const ExperimentManifest& m, ArtifactWriter& out, Stopwatch& clock, bool scatter) {
    const SimulatePlan s = parse_simulate(m.config, scatter);
    const GridPtr grid = RadialGrid::create(s.sim.n, s.sim.r_max);
    const RadialField u0 = RadialField::gaussian(grid, s.init.amplitude, s.init.width, s.init.chirp);
    const TrajectoryLog log = propagate(u0, s.sim);
    clock.lap("propagate");

    Json rep;
    rep["kind"] = to_string(m.kind);
    rep["trajectory"] = trajectory_summary(log);
    out.write("trajectory.csv", log.to_csv());
    out.write("plot_grad_norm.csv", grad_plot(log));
    out.write("plot_virial.csv", virial_plot(log));

    RunOutcome res;
    if (scatter) {
        const bool completed = log.termination == Termination::completed;
        const double k_min = rep["trajectory"]["k_min"].get<double>();
        bool scattered = false, bounded = false;
        double identity = std::numeric_limits<double>::infinity();
        if (completed) {
            const MorawetzReport mor = morawetz_check(log, s.sim.p, s.horizons);
            const ScatteringReport sc = scattering_monitor(log, s.sim.dt);
            const VirialRateReport vr = virial_rate_check(log);
            rep["morawetz"] = parse_json(mor.to_json());
            rep["scattering"] = parse_json(sc.to_json());
            rep["virial_rate"] = parse_json(vr.to_json());
            out.write("morawetz.csv", mor.to_csv());
            std::ostringstream os;
            os << std::setprecision(17) << "t,increment\n";
            for (std::size_t i = 0; i < sc.increments.size(); ++i) os << sc.checkpoints[i + 1] << ',' << sc.increments[i] << '\n';
            out.write("plot_scattering.csv", os.str());
            scattered = sc.scattered;
            bounded = mor.bounded;
            identity = mor.max_identity_error;
        } else {
            rep["scattering"] = nullptr;
            rep["notice"] = "run did not complete; scattering and Morawetz checks are not defined";
        }
        clock.lap("diagnostics");
        res.acceptance_passed = completed && k_min > 0.0 && scattered && bounded && identity < 1e-5;
    }
    rep["acceptance_passed"] = res.acceptance_passed;
    out.write("report.json", rep.dump(2));
    res.summary = rep.dump();
    return res;
}

RunOutcome run_groundstate(const ExperimentManifest& m, ArtifactWriter& out, Stopwatch& clock) {
    const GroundPlan g = parse_ground(m.config, m.seed);
    const GridPtr grid = RadialGrid::create(g.n, g.r_max);
    const GroundStateResult res = minimize_d(g.p, grid, g.descent);
    clock.lap("minimize");
    const double gaussian_bound = projected_action_of(RadialField::gaussian(grid, 1.0), g.p);
    const double l_gap = std::abs(res.d_by_l_characterization - res.d_value) / res.d_value;

    Json rep;
    rep["kind"] = "groundstate";
    rep["result"] = parse_json(res.to_json());
    rep["gaussian_trial_bound"] = gaussian_bound;
    rep["l_characterization_gap"] = l_gap;
    bool ok = res.converged && res.d_value > 0.0 && res.d_value <= gaussian_bound * (1.0 + 1e-3) &&
              res.residual_k_relative < 1e-8 && l_gap < 0.01;
    if (g.refine_n > 0) {
        const GroundStateResult fine = minimize_d(g.p, RadialGrid::create(g.refine_n, g.r_max), g.descent);
        clock.lap("refine");
        const double change = std::abs(fine.d_value - res.d_value) / res.d_value;
        rep["refined"] = parse_json(fine.to_json());
        rep["refinement_change"] = change;
        out.write("profile_refined.csv", fine.profile_csv());
        ok = ok && fine.converged && change < 0.01;
    }
    rep["acceptance_passed"] = ok;
    out.write("ground_state.json", rep.dump(2));
    out.write("profile.csv", res.profile_csv());
    RunOutcome o;
    o.acceptance_passed = ok;
    o.summary = rep.dump();
    return o;
}

RunOutcome run_classify(const ExperimentManifest& m, ArtifactWriter& out, Stopwatch& clock) {
    const ClassifyPlan c = parse_classify(m.config);
    const double d = reference_d(c.p, c.ref);
    clock.lap("reference");
    const GridPtr grid = RadialGrid::create(c.n, c.r_max);
    const ClassificationResult cls = classify(RadialField::gaussian(grid, c.init.amplitude, c.init.width, c.init.chirp), c.p, d);
    Json rep;
    rep["kind"] = "classify";
    rep["classification"] = parse_json(cls.to_json());
    out.write("classification.json", rep.dump(2));
    RunOutcome o;
    o.summary = rep.dump();
    return o;
}

RunOutcome run_dichotomy(const ExperimentManifest& m, ArtifactWriter& out, Stopwatch& clock) {
    const DichotomyPlan plan = parse_dichotomy(m.config);
    const double d = reference_d(plan.sim.p, plan.ref);
    clock.lap("reference");
    const GridPtr grid = RadialGrid::create(plan.sim.n, plan.sim.r_max);

    struct Cell {
        DichotomyRow row;
        std::string csv;
    };
    std::vector<std::future<Cell>> jobs;
    for (double amp : plan.amplitudes) {
        jobs.push_back(std::async(std::launch::async, [&, amp] {
            Cell cell;
            const RadialField u0 = RadialField::gaussian(grid, amp, plan.width);
            const ClassificationResult cls = classify(u0, plan.sim.p, d);
            cell.row.amplitude = amp;
            cell.row.s_value = cls.s_value;
            cell.row.k_value = cls.k_value;
            cell.row.label = to_string(cls.set_label);
            if (cls.set_label == SetLabel::on_boundary) {
                cell.row.outcome = "skipped";
                return cell;
            }
            const TrajectoryLog log = propagate(u0, plan.sim);
            cell.row.outcome = to_string(log.termination);
            cell.row.trigger_time = log.termination_time;
            if (cls.set_label == SetLabel::K_plus) cell.row.consistent = log.termination != Termination::blowup_detected;
            if (cls.set_label == SetLabel::K_minus) cell.row.consistent = log.termination == Termination::blowup_detected;
            cell.csv = log.to_csv();
            return cell;
        }));
    }
    std::vector<Cell> cells;
    for (auto& j : jobs) cells.push_back(j.get());
    clock.lap("ladder");

    // Single-threaded reduction.
    std::ostringstream table;
    table << std::setprecision(17) << "amplitude,S,K,label,outcome,trigger_time,consistent\n";
    Json rows = Json::array();
    bool consistent = true, has_plus = false, has_minus = false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const DichotomyRow& r = cells[i].row;
        table << r.amplitude << ',' << r.s_value << ',' << r.k_value << ',' << r.label << ',' << r.outcome << ','
              << r.trigger_time << ',' << (r.consistent ? "true" : "false") << '\n';
        Json jr;
        jr["amplitude"] = r.amplitude;
        jr["S"] = r.s_value;
        jr["K"] = r.k_value;
        jr["label"] = r.label;
        jr["outcome"] = r.outcome;
        jr["trigger_time"] = r.trigger_time;
        jr["consistent"] = r.consistent;
        if (r.outcome == "skipped") jr["notice"] = "on the threshold boundary; not run";
        rows.push_back(jr);
        consistent = consistent && r.consistent;
        has_plus = has_plus || (r.label == "K_plus" && r.outcome != "blowup_detected" && r.outcome != "skipped");
        has_minus = has_minus || (r.label == "K_minus" && r.outcome == "blowup_detected");
        if (!cells[i].csv.empty()) out.write("trajectory_" + std::to_string(i) + ".csv", cells[i].csv);
    }
    Json rep;
    rep["kind"] = "dichotomy";
    rep["p"] = plan.sim.p;
    rep["d_reference"] = d;
    rep["rows"] = rows;
    rep["consistent"] = consistent;
    rep["acceptance_passed"] = consistent && has_plus && has_minus;
    out.write("dichotomy.csv", table.str());
    out.write("dichotomy.json", rep.dump(2));
    RunOutcome o;
    o.acceptance_passed = rep["acceptance_passed"].get<bool>();
    o.summary = rep.dump();
    return o;
}

RunOutcome run_inequalities(const ExperimentManifest& m, ArtifactWriter& out, Stopwatch& clock) {
    const InequalityPlan plan = parse_inequalities(m.config);
    const GridPtr grid = RadialGrid::create(plan.n, plan.r_max);
    std::vector<std::future<SweepReport>> jobs;
    for (const InequalityCase& c : plan.cases)
        jobs.push_back(std::async(std::launch::async,
                                  [&, c] { return sweep_report(c, grid, plan.fields_per_case, m.seed); }));
    std::vector<SweepReport> reps;
    for (auto& j : jobs) reps.push_back(j.get());
    clock.lap("sweeps");

    Json arr = Json::array();
    std::ostringstream csv;
    csv << std::setprecision(17) << "label,max_ratio,median_ratio,max_ratio_second_seed,constant,violations,dilation_spread\n";
    bool ok = true;
    for (const SweepReport& r : reps) {
        arr.push_back(parse_json(r.to_json()));
        csv << '"' << r.c.label << "\"," << r.max_ratio << ',' << r.median_ratio << ',' << r.max_ratio_second_seed << ','
            << (std::isfinite(r.constant) ? csv_number(r.constant) : "") << ',' << r.violations << ','
            << (std::isfinite(r.dilation_spread) ? csv_number(r.dilation_spread) : "") << '\n';
        ok = ok && r.violations == 0 && r.seed_stable && !(r.dilation_spread >= 0.05);
    }
    Json rep;
    rep["kind"] = "inequalities";
    rep["cases"] = arr;
    rep["acceptance_passed"] = ok;
    out.write("inequalities.json", rep.dump(2));
    out.write("inequalities.csv", csv.str());
    RunOutcome o;
    o.acceptance_passed = ok;
    o.summary = rep.dump();
    return o;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

Json initial(double amplitude, double width) {
    Json j;
    j["amplitude"] = amplitude;
    j["width"] = width;
    j["chirp"] = 0.0;
    return j;
}

Json simulate_config(double p, int n, double r_max, double dt, double t_end, Json init, int log_stride) {
    Json c;
    c["p"] = p;
    c["n"] = n;
    c["r_max"] = r_max;
    c["dt"] = dt;
    c["t_end"] = t_end;
    c["initial"] = std::move(init);
    c["nonlinear"] = true;
    c["log_stride"] = log_stride;
    c["virial_radius"] = 0.0;
    c["snapshot_times"] = Json::array();
    c["blowup_gradient_factor"] = 10.0;
    c["boundary_mass_tol"] = 1e-8;
    return c;
}

Json reference(int n, double r_max) {
    Json j;
    j["n"] = n;
    j["r_max"] = r_max;
    return j;
}

ExperimentManifest make(ExperimentKind kind, const std::string& name, Json config) {
    ExperimentManifest m;
    m.kind = kind;
    m.seed = 1;
    m.output_dir = "runs/" + name;
    m.config = std::move(config);
    return m;
}

const std::vector<std::pair<std::string, ExperimentManifest>>& presets() {
    static const std::vector<std::pair<std::string, ExperimentManifest>> table = [] {
        std::vector<std::pair<std::string, ExperimentManifest>> t;
        auto add = [&](const std::string& name, ExperimentKind kind, Json cfg) { t.emplace_back(name, make(kind, name, std::move(cfg))); };

        Json free = simulate_config(5.0, 2048, 64.0, 1e-3, 1.0, initial(1.0, 1.0), 100);
        free["nonlinear"] = false;
        add("free_gaussian", ExperimentKind::simulate, free);
        add("kplus_conservation", ExperimentKind::simulate,
            simulate_config(5.0, 4096, 128.0, 0.01, 5.0, initial(1.0, 1.0), 10));
        add("kplus_conservation_fine", ExperimentKind::simulate,
            simulate_config(5.0, 4096, 128.0, 0.005, 5.0, initial(1.0, 1.0), 20));
        add("kminus_blowup", ExperimentKind::simulate,
            simulate_config(5.0, 4096, 32.0, 1e-4, 5.0, initial(2.5, 1.0), 10));
        add("kminus_blowup_p45", ExperimentKind::simulate,
            simulate_config(4.5, 4096, 32.0, 1e-4, 5.0, initial(2.5, 1.0), 10));

        Json scatter = simulate_config(5.0, 4096, 128.0, 0.01, 25.0, initial(0.3, 2.0), 10);
        scatter["snapshot_times"] = Json::array({0.0, 5.0, 10.0, 15.0, 20.0, 25.0});
        scatter["horizons"] = Json::array({5.0, 10.0, 15.0, 20.0, 25.0});
        add("kplus_scatter", ExperimentKind::scatter_check, scatter);

        Json gs;
        gs["p"] = 5.0;
        gs["n"] = 1024;
        gs["r_max"] = 32.0;
        gs["starts"] = 3;
        gs["gaussians"] = 3;
        gs["max_iterations"] = 20000;
        gs["refine_n"] = 2048;
        add("groundstate_p5", ExperimentKind::groundstate, gs);
        gs["p"] = 4.5;
        add("groundstate_p45", ExperimentKind::groundstate, gs);

        Json cl;
        cl["p"] = 5.0;
        cl["n"] = 4096;
        cl["r_max"] = 32.0;
        cl["initial"] = initial(0.1, 1.0);
        cl["d_reference"] = 0.0;
        cl["ground_state"] = reference(1024, 32.0);
        add("classify_small", ExperimentKind::classify, cl);

        Json di;
        di["p"] = 5.0;
        di["n"] = 8192;
        di["r_max"] = 128.0;
        di["dt"] = 5e-4;
        di["t_end"] = 5.0;
        di["width"] = 1.0;
        di["amplitudes"] = Json::array({0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
        di["log_stride"] = 100;
        di["d_reference"] = 0.0;
        di["ground_state"] = reference(1024, 32.0);
        add("dichotomy_p5", ExperimentKind::dichotomy, di);

        Json iq;
        iq["p"] = 5.0;
        iq["n"] = 4096;
        iq["r_max"] = 64.0;
        iq["fields_per_case"] = 100;
        iq["cases"] = Json::array();
        add("inequalities_p5", ExperimentKind::inequalities, iq);
        return t;
    }();
    return table;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::simulate: return "simulate";
        case ExperimentKind::groundstate: return "groundstate";
        case ExperimentKind::classify: return "classify";
        case ExperimentKind::dichotomy: return "dichotomy";
        case ExperimentKind::inequalities: return "inequalities";
        case ExperimentKind::scatter_check: return "scatter_check";
    }
    return "simulate";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    for (ExperimentKind k : {ExperimentKind::simulate, ExperimentKind::groundstate, ExperimentKind::classify,
                             ExperimentKind::dichotomy, ExperimentKind::inequalities, ExperimentKind::scatter_check})
        if (to_string(k) == s) return k;
    throw UsageError("kind: unknown experiment kind '" + s + "'");
}

ExperimentManifest ExperimentManifest::parse(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("manifest: not valid JSON (") + e.what() + ")");
    }
    if (!j.is_object()) throw UsageError("manifest: expected a JSON object");
    std::vector<std::string> keys = {"kind", "version", "seed", "output_dir", "config"};
    if (j.contains("config_hash")) keys.push_back("config_hash");
    const Fields f(j, "", keys);
    ExperimentManifest m;
    m.kind = experiment_kind_from_string(f.string("kind"));
    m.version = f.string("version");
    m.seed = seed_value(j.at("seed"), "seed");
    m.output_dir = f.string("output_dir");
    m.config = j.at("config");
    if (j.contains("config_hash") && f.string("config_hash") != m.config_hash())
        throw UsageError("config_hash: does not match the config payload");
    m.validate();
    return m;
}

void ExperimentManifest::validate() const {
    if (version != kManifestVersion)
        throw UsageError("version: unsupported manifest version '" + version + "' (expected " + kManifestVersion + ")");
    if (output_dir.empty()) throw UsageError("output_dir: must not be empty");
    switch (kind) {
        case ExperimentKind::simulate: (void)parse_simulate(config, false); break;
        case ExperimentKind::scatter_check: (void)parse_simulate(config, true); break;
        case ExperimentKind::groundstate: (void)parse_ground(config, seed); break;
        case ExperimentKind::classify: (void)parse_classify(config); break;
        case ExperimentKind::dichotomy: (void)parse_dichotomy(config); break;
        case ExperimentKind::inequalities: (void)parse_inequalities(config); break;
    }
}

std::string ExperimentManifest::config_hash() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config.dump());
    return os.str();
}

std::string ExperimentManifest::dump() const {
    Json j;
    j["kind"] = to_string(kind);
    j["version"] = version;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["config"] = config;
    j["config_hash"] = config_hash();
    return j.dump(2) + "\n";
}

ExperimentManifest apply_overrides(const ExperimentManifest& m, const Json& overrides) {
    if (!overrides.is_object()) throw UsageError("overrides: expected an object");
    ExperimentManifest out = m;
    for (const auto& item : overrides.items()) {
        const std::string& key = item.key();
        const Json& v = item.value();
        if (key == "seed") {
            out.seed = seed_value(v, "--seed");
        } else if (key == "output_dir") {
            if (!v.is_string()) throw UsageError("--out: expected a path");
            out.output_dir = v.get<std::string>();
        } else if (key == "p" || key == "n" || key == "r_max" || key == "dt" || key == "t_end") {
            if (!out.config.contains(key))
                throw UsageError("--" + key + ": not applicable to experiment kind '" + to_string(m.kind) + "'");
            if (key == "n" && !v.is_number_integer()) throw UsageError("--n: expected an integer");
            if (!v.is_number()) throw UsageError("--" + key + ": expected a number");
            out.config[key] = v;
        } else {
            throw UsageError("overrides: unknown key '" + key + "'");
        }
    }
    out.validate();
    return out;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, m] : presets()) names.push_back(name);
    return names;
}

ExperimentManifest preset_manifest(const std::string& name) {
    for (const auto& [n, m] : presets())
        if (n == name) return m;
    throw UsageError("preset: unknown preset '" + name + "'");
}

RunOutcome run(const ExperimentManifest& m) {
    m.validate();
    const fs::path dir = prepare_output(m);
    ArtifactWriter out(dir);
    out.write("manifest.json", m.dump());
    Stopwatch clock;
    RunOutcome res;
    switch (m.kind) {
        case ExperimentKind::simulate: res = run_simulate(m, out, clock, false); break;
        case ExperimentKind::scatter_check: res = run_simulate(m, out, clock, true); break;
        case ExperimentKind::groundstate: res = run_groundstate(m, out, clock); break;
        case ExperimentKind::classify: res = run_classify(m, out, clock); break;
        case ExperimentKind::dichotomy: res = run_dichotomy(m, out, clock); break;
        case ExperimentKind::inequalities: res = run_inequalities(m, out, clock); break;
    }
    out.write("timing.json", clock.json());
    res.artifacts = out.files();
    return res;
}

}  // namespace css
