/* @file css_c.h
 * @brief Stable C interface of the radial Chern-Simons-Schroedinger laboratory.
 *
 * Conventions:
 *   - every function returns a css_status; CSS_OK is 0;
 *   - on failure css_last_error() returns a message for the calling thread;
 *   - objects are opaque handles released with the matching *_free function;
 *   - strings returned through char** are heap-allocated and must be released
 *     with css_string_free.
 */
#ifndef CSS_C_H
#define CSS_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CSS_BUILDING_LIBRARY)
#    define CSS_API __declspec(dllexport)
#  else
#    define CSS_API __declspec(dllimport)
#  endif
#else
#  define CSS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum css_status {
    CSS_OK = 0,
    CSS_ERR_CONTRACT = 1,   /* precondition violated by the caller */
    CSS_ERR_CORRUPTED = 2,  /* NaN/Inf in a field or density */
    CSS_ERR_DOMAIN = 3,     /* quantity undefined for these inputs */
    CSS_ERR_IO = 4,         /* artifact read/write failure */
    CSS_ERR_USAGE = 5,      /* invalid experiment configuration */
    CSS_ERR_INTERNAL = 6    /* anything else */
} css_status;

typedef struct css_grid css_grid;
typedef struct css_field css_field;

/* Functionals of one field at exponent p. */
typedef struct css_report {
    double mass;
    double energy;
    double action;
    double nehari;
    double l_value;
    double q_charge;
    double grad_kinetic;
    double p_norm;
} css_report;

/* Set labels returned by css_classify. */
typedef enum css_set_label {
    CSS_K_PLUS = 0,
    CSS_K_MINUS = 1,
    CSS_ABOVE_THRESHOLD = 2,
    CSS_ON_BOUNDARY = 3
} css_set_label;

CSS_API const char* css_version(void);
CSS_API const char* css_last_error(void);
CSS_API const char* css_status_name(css_status status);
CSS_API void css_string_free(char* s);

/* Grids */
CSS_API css_status css_grid_create(int n, double r_max, css_grid** out);
CSS_API void css_grid_free(css_grid* grid);
CSS_API css_status css_grid_size(const css_grid* grid, int* n);
CSS_API css_status css_grid_nodes(const css_grid* grid, double* r, size_t len);

/* Fields */
CSS_API css_status css_field_gaussian(const css_grid* grid, double amplitude, double width, double chirp,
                                      css_field** out);
/* re/im hold n samples each. */
CSS_API css_status css_field_from_samples(const css_grid* grid, const double* re, const double* im, size_t len,
                                          css_field** out);
CSS_API void css_field_free(css_field* field);
CSS_API css_status css_field_samples(const css_field* field, double* re, double* im, size_t len);

/* Diagnostics */
CSS_API css_status css_field_report(const css_field* field, double p, css_report* out);
CSS_API css_status css_classify(const css_field* field, double p, double d_reference, css_set_label* label);
/* Advances the field in place by `steps` Strang steps of size dt. */
CSS_API css_status css_field_evolve(css_field* field, double p, double dt, long steps);
CSS_API css_status css_ground_state_d(double p, const css_grid* grid, uint64_t seed, double* d);

/* Experiments */
CSS_API css_status css_preset_names(char** names_json);
CSS_API css_status css_preset_manifest(const char* name, char** manifest_json);
/* Validates and canonicalises a manifest (applies overrides_json when non-NULL). */
CSS_API css_status css_manifest_prepare(const char* manifest_json, const char* overrides_json, char** canonical_json);
/* Runs a manifest; *acceptance_passed receives the kind's built-in verdict. */
CSS_API css_status css_run_manifest(const char* manifest_json, int* acceptance_passed, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* CSS_C_H */
