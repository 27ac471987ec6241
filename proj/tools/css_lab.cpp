/// @file css_lab.cpp
/// @brief Command-line runner.  Talks to the library only through css_c.h.
///
/// Exit codes: 0 success, 2 usage error, 3 runtime or I/O error,
/// 4 the experiment ran but its acceptance checks failed.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "css/css_c.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitAcceptance = 4;

/// Owns a string allocated by the library.
struct LibString {
    char* ptr = nullptr;
    ~LibString() { css_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct CliError {
    int code;
    std::string message;
};

void check(css_status s) {
    if (s == CSS_OK) return;
    throw CliError{s == CSS_ERR_USAGE ? kExitUsage : kExitRuntime,
                   std::string(css_status_name(s)) + ": " + css_last_error()};
}

struct Options {
    std::optional<double> p, rmax, dt, t_end;
    std::optional<int> n;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out, preset, config;
};

const std::map<std::string, std::pair<std::string, std::string>>& commands() {
    // subcommand -> (manifest kind, default preset)
    static const std::map<std::string, std::pair<std::string, std::string>> table = {
        {"simulate", {"simulate", "kplus_conservation"}},
        {"groundstate", {"groundstate", "groundstate_p5"}},
        {"classify", {"classify", "classify_small"}},
        {"dichotomy", {"dichotomy", "dichotomy_p5"}},
        {"inequalities", {"inequalities", "inequalities_p5"}},
        {"scatter-check", {"scatter_check", "kplus_scatter"}},
    };
    return table;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{kExitRuntime, "I/O error: cannot read '" + path + "'"};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int execute(const std::string& command, const Options& opt) {
    const auto& [kind, default_preset] = commands().at(command);
    if (opt.preset && opt.config) throw CliError{kExitUsage, "usage error: --preset and --config are exclusive"};

    std::string manifest;
    if (opt.config) {
        manifest = read_file(*opt.config);
    } else {
        LibString s;
        check(css_preset_manifest(opt.preset ? opt.preset->c_str() : default_preset.c_str(), &s.ptr));
        manifest = s.str();
    }

    nlohmann::ordered_json overrides = nlohmann::ordered_json::object();
    if (opt.p) overrides["p"] = *opt.p;
    if (opt.n) overrides["n"] = *opt.n;
    if (opt.rmax) overrides["r_max"] = *opt.rmax;
    if (opt.dt) overrides["dt"] = *opt.dt;
    if (opt.t_end) overrides["t_end"] = *opt.t_end;
    if (opt.seed) overrides["seed"] = *opt.seed;
    if (opt.out) overrides["output_dir"] = *opt.out;

    LibString canonical;
    check(css_manifest_prepare(manifest.c_str(), overrides.dump().c_str(), &canonical.ptr));
    const auto parsed = nlohmann::ordered_json::parse(canonical.str());
    if (parsed.at("kind").get<std::string>() != kind)
        throw CliError{kExitUsage, "usage error: manifest kind '" + parsed.at("kind").get<std::string>() +
                                       "' does not match subcommand '" + command + "'"};

    int passed = 0;
    LibString summary;
    check(css_run_manifest(canonical.str().c_str(), &passed, &summary.ptr));
    std::cout << summary.str() << '\n';
    std::cout << "artifacts: " << parsed.at("output_dir").get<std::string>() << '\n';
    if (!passed) {
        std::cerr << "css_lab: acceptance checks failed\n";
        return kExitAcceptance;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"css_lab - radial Chern-Simons-Schroedinger laboratory"};
    app.require_subcommand(0, 1);
    bool list = false;
    app.add_flag("--list-presets", list, "Print the bundled preset names and exit");

    Options opt;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands()) {
        CLI::App* sub = app.add_subcommand(name, "Run a '" + entry.first + "' experiment");
        sub->add_option("--p", opt.p, "Nonlinearity exponent (p > 3)");
        sub->add_option("--n", opt.n, "Number of radial nodes");
        sub->add_option("--rmax", opt.rmax, "Outer radius of the grid");
        sub->add_option("--dt", opt.dt, "Time step");
        sub->add_option("--t-end", opt.t_end, "Final time");
        sub->add_option("--seed", opt.seed, "Random seed");
        sub->add_option("--out", opt.out, "Output directory");
        sub->add_option("--preset", opt.preset, "Bundled preset name (default: " + entry.second + ")");
        sub->add_option("--config", opt.config, "Manifest JSON file");
        subs[name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (list) {
            LibString names;
            check(css_preset_names(&names.ptr));
            for (const auto& n : nlohmann::json::parse(names.str())) std::cout << n.get<std::string>() << '\n';
            return kExitOk;
        }
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) return execute(name, opt);
        std::cerr << app.help();
        return kExitUsage;
    } catch (const CliError& e) {
        std::cerr << "css_lab: " << e.message << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "css_lab: internal error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
