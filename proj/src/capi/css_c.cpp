/// @file css_c.cpp
/// @brief extern "C" boundary: exception-to-status translation and opaque handles.
#include "css/css_c.h"

#include <cstring>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "css/dichotomy.hpp"
#include "css/evolution.hpp"
#include "css/functionals.hpp"
#include "css/ground_state.hpp"
#include "css/runner.hpp"

struct css_grid {
    css::GridPtr grid;
};

struct css_field {
    css::RadialField field;
};

namespace {

thread_local std::string g_last_error;

css_status fail(css_status s, const char* what) {
    g_last_error = what;
    return s;
}

/// Runs @p body, mapping the library's exception vocabulary onto status codes.
template <class F>
css_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return CSS_OK;
    } catch (const css::UsageError& e) {
        return fail(CSS_ERR_USAGE, e.what());
    } catch (const css::ContractViolation& e) {
        return fail(CSS_ERR_CONTRACT, e.what());
    } catch (const css::CorruptedState& e) {
        return fail(CSS_ERR_CORRUPTED, e.what());
    } catch (const css::DomainError& e) {
        return fail(CSS_ERR_DOMAIN, e.what());
    } catch (const css::IoError& e) {
        return fail(CSS_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CSS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CSS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CSS_ERR_INTERNAL, "unknown exception");
    }
}

void need(const void* p, const char* what) {
    if (p == nullptr) throw css::ContractViolation(std::string(what) + " must not be NULL");
}

char* duplicate(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* css_version(void) { return css::kManifestVersion; }

const char* css_last_error(void) { return g_last_error.c_str(); }

const char* css_status_name(css_status status) {
    switch (status) {
        case CSS_OK: return "ok";
        case CSS_ERR_CONTRACT: return "contract violation";
        case CSS_ERR_CORRUPTED: return "corrupted state";
        case CSS_ERR_DOMAIN: return "domain error";
        case CSS_ERR_IO: return "I/O error";
        case CSS_ERR_USAGE: return "usage error";
        case CSS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void css_string_free(char* s) { delete[] s; }

css_status css_grid_create(int n, double r_max, css_grid** out) {
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        *out = new css_grid{css::RadialGrid::create(n, r_max)};
    });
}

void css_grid_free(css_grid* grid) { delete grid; }

css_status css_grid_size(const css_grid* grid, int* n) {
    return guarded([&] {
        need(grid, "grid");
        need(n, "n");
        *n = grid->grid->n();
    });
}

css_status css_grid_nodes(const css_grid* grid, double* r, size_t len) {
    return guarded([&] {
        need(grid, "grid");
        need(r, "r");
        const css::RealSamples& nodes = grid->grid->nodes();
        css::require(len == nodes.size(), "css_grid_nodes: len must equal the node count");
        std::memcpy(r, nodes.data(), len * sizeof(double));
    });
}

css_status css_field_gaussian(const css_grid* grid, double amplitude, double width, double chirp, css_field** out) {
    return guarded([&] {
        need(grid, "grid");
        need(out, "out");
        *out = nullptr;
        *out = new css_field{css::RadialField::gaussian(grid->grid, amplitude, width, chirp)};
    });
}

css_status css_field_from_samples(const css_grid* grid, const double* re, const double* im, size_t len,
                                  css_field** out) {
    return guarded([&] {
        need(grid, "grid");
        need(re, "re");
        need(im, "im");
        need(out, "out");
        *out = nullptr;
        css::require(len == static_cast<size_t>(grid->grid->n()), "css_field_from_samples: len must equal the node count");
        css::ComplexSamples v(len);
        for (size_t j = 0; j < len; ++j) v[j] = {re[j], im[j]};
        css::RadialField f(grid->grid, std::move(v), "c_api");
        f.check_finite();
        *out = new css_field{std::move(f)};
    });
}

void css_field_free(css_field* field) { delete field; }

css_status css_field_samples(const css_field* field, double* re, double* im, size_t len) {
    return guarded([&] {
        need(field, "field");
        need(re, "re");
        need(im, "im");
        css::require(len == field->field.size(), "css_field_samples: len must equal the node count");
        for (size_t j = 0; j < len; ++j) {
            re[j] = field->field.values[j].real();
            im[j] = field->field.values[j].imag();
        }
    });
}

css_status css_field_report(const css_field* field, double p, css_report* out) {
    return guarded([&] {
        need(field, "field");
        need(out, "out");
        const css::FunctionalReport r = css::report(field->field, p);
        *out = {r.mass, r.energy, r.action, r.nehari, r.l_value, r.q_charge, r.grad_kinetic, r.p_norm};
    });
}

css_status css_classify(const css_field* field, double p, double d_reference, css_set_label* label) {
    return guarded([&] {
        need(field, "field");
        need(label, "label");
        switch (css::classify(field->field, p, d_reference).set_label) {
            case css::SetLabel::K_plus: *label = CSS_K_PLUS; break;
            case css::SetLabel::K_minus: *label = CSS_K_MINUS; break;
            case css::SetLabel::above_threshold: *label = CSS_ABOVE_THRESHOLD; break;
            case css::SetLabel::on_boundary: *label = CSS_ON_BOUNDARY; break;
        }
    });
}

css_status css_field_evolve(css_field* field, double p, double dt, long steps) {
    return guarded([&] {
        need(field, "field");
        css::require(steps >= 0, "css_field_evolve: steps must be >= 0");
        css::require_supercritical(p);
        css::RadialField u = field->field;
        const css::LinearPropagator lin(u.grid, dt);
        for (long k = 0; k < steps; ++k) u = css::step_strang(u, lin, p);
        field->field = std::move(u);
    });
}

css_status css_ground_state_d(double p, const css_grid* grid, uint64_t seed, double* d) {
    return guarded([&] {
        need(grid, "grid");
        need(d, "d");
        css::DescentConfig cfg;
        cfg.seed = seed;
        *d = css::minimize_d(p, grid->grid, cfg).d_value;
    });
}

css_status css_preset_names(char** names_json) {
    return guarded([&] {
        need(names_json, "names_json");
        *names_json = duplicate(nlohmann::json(css::preset_names()).dump());
    });
}

css_status css_preset_manifest(const char* name, char** manifest_json) {
    return guarded([&] {
        need(name, "name");
        need(manifest_json, "manifest_json");
        *manifest_json = duplicate(css::preset_manifest(name).dump());
    });
}

css_status css_manifest_prepare(const char* manifest_json, const char* overrides_json, char** canonical_json) {
    return guarded([&] {
        need(manifest_json, "manifest_json");
        need(canonical_json, "canonical_json");
        css::ExperimentManifest m = css::ExperimentManifest::parse(manifest_json);
        if (overrides_json != nullptr) {
            nlohmann::ordered_json o;
            try {
                o = nlohmann::ordered_json::parse(overrides_json);
            } catch (const nlohmann::json::parse_error& e) {
                throw css::UsageError(std::string("overrides: not valid JSON (") + e.what() + ")");
            }
            m = css::apply_overrides(m, o);
        }
        *canonical_json = duplicate(m.dump());
    });
}

css_status css_run_manifest(const char* manifest_json, int* acceptance_passed, char** summary_json) {
    return guarded([&] {
        need(manifest_json, "manifest_json");
        need(acceptance_passed, "acceptance_passed");
        need(summary_json, "summary_json");
        const css::RunOutcome res = css::run(css::ExperimentManifest::parse(manifest_json));
        *acceptance_passed = res.acceptance_passed ? 1 : 0;
        *summary_json = duplicate(res.summary);
    });
}

}  // extern "C"
