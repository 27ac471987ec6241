/// @file runner.hpp
/// @brief Experiment manifests, bundled presets and the artifact-writing runner.
///
/// A manifest is a JSON object with exactly the keys
///   kind, version, seed, output_dir, config   (+ optional config_hash)
/// where config is the per-kind payload documented in README.md.  Parsing is
/// strict: unknown or missing keys and wrong types raise UsageError naming the
/// offending field.  dump() is canonical, so parse(dump(m)).dump() == dump(m)
/// byte for byte.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "css/errors.hpp"

namespace css {

enum class ExperimentKind { simulate, groundstate, classify, dichotomy, inequalities, scatter_check };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

inline constexpr const char* kManifestVersion = "css-lab/1";

struct ExperimentManifest {
    ExperimentKind kind = ExperimentKind::simulate;
    std::string version = kManifestVersion;
    std::uint64_t seed = 1;
    std::string output_dir;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();

    /// Strict parse + full per-kind validation; UsageError on any defect.
    static ExperimentManifest parse(const std::string& text);
    /// Canonical serialisation, including config_hash.
    std::string dump() const;
    /// FNV-1a 64 of the canonical config text, as 16 hex digits.
    std::string config_hash() const;
    /// Throws UsageError with a field-level message unless the config is valid.
    void validate() const;
};

/// Scalar command-line overrides; keys: p, n, r_max, dt, t_end, seed, output_dir.
/// A key the manifest's kind does not use raises UsageError.
ExperimentManifest apply_overrides(const ExperimentManifest& m, const nlohmann::ordered_json& overrides);

/// Names of the bundled presets.
std::vector<std::string> preset_names();
/// Bundled preset by name; UsageError if unknown.
ExperimentManifest preset_manifest(const std::string& name);

/// Result of run().
struct RunOutcome {
    bool acceptance_passed = true;  ///< the kind's built-in checks (see README)
    std::string summary;            ///< compact JSON summary of the main report
    std::vector<std::string> artifacts;  ///< files written, relative to output_dir
};

/// Validates, then writes every artifact under m.output_dir.  Nothing is
/// created when validation fails.  UsageError for a non-empty output
/// directory that belongs to a different manifest; IoError on write failures.
RunOutcome run(const ExperimentManifest& m);

/// One row of the dichotomy table.
struct DichotomyRow {
    double amplitude = 0.0;
    double s_value = 0.0;
    double k_value = 0.0;
    std::string label;
    std::string outcome;          ///< termination of the run, or "skipped"
    double trigger_time = 0.0;    ///< blow-up or contamination time, else t_end
    bool consistent = true;       ///< outcome agrees with the label
};

}  // namespace css
