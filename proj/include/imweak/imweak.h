// Copyright 2026 The imweak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the imweak simulation library.
 *
 * All objects are opaque handles created by imw_*_create / constructor calls
 * and released with the matching imw_*_destroy. Every fallible call returns
 * an imw_status; on failure imw_last_error() holds a module-qualified message
 * for the calling thread until the next failing call on that thread.
 * Handles are immutable after creation and may be shared across threads.
 */
#ifndef IMWEAK_IMWEAK_H
#define IMWEAK_IMWEAK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(IMWEAK_BUILDING_LIBRARY)
#    define IMWEAK_API __declspec(dllexport)
#  else
#    define IMWEAK_API __declspec(dllimport)
#  endif
#else
#  define IMWEAK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum imw_status {
    IMW_OK = 0,
    IMW_ERR_INVALID_ARGUMENT = 1,
    IMW_ERR_DIMENSION_MISMATCH = 2,
    IMW_ERR_NOT_HERMITIAN = 3,
    IMW_ERR_NOT_NORMALIZED = 4,
    IMW_ERR_DEGENERATE_SELECTION = 5,
    IMW_ERR_ZERO_ACCEPTANCE = 6,
    IMW_ERR_IO = 7,
    IMW_ERR_INTERNAL = 8
} imw_status;

typedef struct imw_observable imw_observable;
typedef struct imw_selection imw_selection;
typedef struct imw_distribution imw_distribution;
typedef struct imw_meter imw_meter;

typedef struct imw_complex {
    double re;
    double im;
} imw_complex;

typedef struct imw_weak_value {
    double re;
    double im;
} imw_weak_value;

typedef struct imw_moments {
    double mean;
    double variance;
    double std;
} imw_moments;

IMWEAK_API const char* imw_version(void);
IMWEAK_API const char* imw_last_error(void);
IMWEAK_API const char* imw_status_string(imw_status status);

/* ---- states, observables, weak values ---------------------------------- */

/* entries: row-major dim x dim. Fails with IMW_ERR_NOT_HERMITIAN when the
 * matrix differs from its adjoint by more than 1e-12 (relative to its
 * largest entry, floor 1). */
IMWEAK_API imw_status imw_observable_create(const imw_complex* entries, size_t dim, imw_observable** out);
IMWEAK_API void imw_observable_destroy(imw_observable* obs);
IMWEAK_API size_t imw_observable_dim(const imw_observable* obs);
/* Largest |m_ij - conj(m_ji)|, for diagnostics. */
IMWEAK_API imw_status imw_matrix_max_asymmetry(const imw_complex* entries, size_t dim, double* out);

/* Both states must be normalized (|norm^2 - 1| <= 1e-12) and non-orthogonal. */
IMWEAK_API imw_status imw_selection_create(const imw_complex* pre, const imw_complex* post, size_t dim,
                                           imw_selection** out);
IMWEAK_API void imw_selection_destroy(imw_selection* sel);
IMWEAK_API size_t imw_selection_dim(const imw_selection* sel);
IMWEAK_API imw_status imw_selection_overlap(const imw_selection* sel, imw_complex* out);

IMWEAK_API imw_status imw_inner(const imw_complex* bra, const imw_complex* ket, size_t dim, imw_complex* out);
IMWEAK_API imw_status imw_compute_weak_value(const imw_observable* obs, const imw_selection* sel, double overlap_tol,
                                     imw_weak_value* out);
/* out receives exp(-i k C) psi; out may not alias psi. */
IMWEAK_API imw_status imw_evolve(const imw_observable* obs, double k, const imw_complex* psi, size_t dim,
                                 imw_complex* out);
IMWEAK_API imw_status imw_expectation(const imw_observable* obs, const imw_complex* psi, size_t dim, double* out);

/* ---- coupling distributions -------------------------------------------- */

IMWEAK_API imw_status imw_dist_gaussian(double mean, double sigma, size_t n, double span, imw_distribution** out);
IMWEAK_API imw_status imw_dist_exponential(double rate, size_t n, double span, imw_distribution** out);
IMWEAK_API imw_status imw_dist_uniform(double a, double b, size_t n, imw_distribution** out);
IMWEAK_API imw_status imw_dist_from_table(const double* nodes, const double* values, size_t n,
                                          imw_distribution** out);
IMWEAK_API imw_status imw_dist_load_csv(const char* path, imw_distribution** out);
IMWEAK_API imw_status imw_dist_write_csv(const imw_distribution* dist, const char* path);
IMWEAK_API imw_status imw_dist_affine(const imw_distribution* dist, double a, double b, imw_distribution** out);
IMWEAK_API void imw_dist_destroy(imw_distribution* dist);
IMWEAK_API size_t imw_dist_size(const imw_distribution* dist);
/* Copies nodes and densities (either may be NULL); capacity >= size. */
IMWEAK_API imw_status imw_dist_copy(const imw_distribution* dist, double* nodes, double* densities,
                                    size_t capacity);
IMWEAK_API imw_status imw_dist_moments(const imw_distribution* dist, imw_moments* out);
IMWEAK_API double imw_dist_skewness(const imw_distribution* dist);
IMWEAK_API double imw_dist_renormalization_factor(const imw_distribution* dist);

/* ---- post-selection engine --------------------------------------------- */

typedef struct imw_postselect_options {
    double overlap_tolerance;  /* default 1e-10 */
    double validity_threshold; /* default 0.1 */
    int center_on_mean;        /* default 1 */
} imw_postselect_options;

IMWEAK_API void imw_postselect_options_default(imw_postselect_options* out);

typedef struct imw_postselection_report {
    double avg_probability;
    imw_moments prior_moments;
    imw_moments posterior_moments;
    double exact_shift;
    double analytic_shift;
    double validity_ratio;
    imw_weak_value weak_value_used;
    int weak_ok;
    double validity_threshold;
    double prior_skewness;
    double mean_offset;
} imw_postselection_report;

IMWEAK_API imw_status imw_prob_exact(const imw_observable* obs, const imw_selection* sel, double k, double* out);
IMWEAK_API imw_status imw_prob_first_order(const imw_observable* obs, const imw_selection* sel, double k,
                                           double overlap_tol, double* out);
IMWEAK_API imw_status imw_posterior(const imw_distribution* prior, const imw_observable* obs,
                                    const imw_selection* sel, imw_distribution** posterior,
                                    double* avg_probability);
IMWEAK_API imw_status imw_exact_shift(const imw_distribution* prior, const imw_observable* obs,
                                      const imw_selection* sel, double* out);
IMWEAK_API imw_status imw_analytic_shift(imw_weak_value wv, const imw_distribution* prior, double* out);
/* psi_prime receives dim amplitudes of exp(-i <k> C)|Psi>. */
IMWEAK_API imw_status imw_offset_decomposition(const imw_distribution* prior, const imw_observable* obs,
                                               const imw_selection* sel, double overlap_tol,
                                               imw_complex* psi_prime, imw_weak_value* modified_wv,
                                               double* analytic_shift_centered);
IMWEAK_API imw_status imw_validity(imw_weak_value wv, const imw_distribution* prior, double threshold,
                                   double* ratio, int* weak_ok);
/* options may be NULL (defaults); posterior may be NULL. */
IMWEAK_API imw_status imw_postselect_run(const imw_distribution* prior, const imw_observable* obs,
                                         const imw_selection* sel, const imw_postselect_options* options,
                                         imw_postselection_report* out, imw_distribution** posterior);

typedef struct imw_mc_report {
    uint64_t n_total;
    uint64_t n_accepted;
    double accept_fraction;
    double posterior_mean_estimate;
    double standard_error;
    uint64_t seed;
} imw_mc_report;

/* threads = 0 uses the hardware concurrency; IMWEAK_THREADS caps either. */
IMWEAK_API imw_status imw_mc_run(const imw_distribution* prior, const imw_observable* obs,
                                 const imw_selection* sel, uint64_t n, uint64_t seed, unsigned threads,
                                 imw_mc_report* out);

/* ---- quantum meter ------------------------------------------------------ */

typedef struct imw_meter_shift_report {
    double delta_p;
    double delta_p_predicted;
    double delta_q;
    double delta_q_predicted;
    double var_p;
} imw_meter_shift_report;

IMWEAK_API imw_status imw_meter_gaussian(double sigma_p, size_t n, double span, imw_meter** out);
IMWEAK_API void imw_meter_destroy(imw_meter* meter);
IMWEAK_API size_t imw_meter_size(const imw_meter* meter);
IMWEAK_API imw_status imw_meter_postselect(const imw_meter* meter, double k, const imw_observable* obs,
                                           const imw_selection* sel, imw_meter** after, double* probability);
IMWEAK_API imw_status imw_meter_p_shift(const imw_meter* before, const imw_meter* after, double* out);
IMWEAK_API imw_status imw_meter_q_shift(const imw_meter* before, const imw_meter* after, int allow_complex,
                                        double* out);
IMWEAK_API imw_status imw_meter_compute_shifts(const imw_meter* before, const imw_meter* after, double k,
                                             imw_weak_value wv, imw_meter_shift_report* out);
/* |psi(p)|^2 on the meter grid as a distribution. */
IMWEAK_API imw_status imw_meter_density(const imw_meter* meter, imw_distribution** out);
IMWEAK_API imw_status imw_meter_write_csv(const imw_meter* meter, const char* path);

/* ---- experiment presets ------------------------------------------------- */

typedef enum imw_scenario_kind {
    IMW_SCENARIO_WHITE_LIGHT_PHASE = 0,
    IMW_SCENARIO_MICHELSON_FS = 1,
    IMW_SCENARIO_ATOMIC_EMISSION = 2,
    IMW_SCENARIO_DOPPLER = 3
} imw_scenario_kind;

typedef struct imw_scenario_params {
    imw_scenario_kind kind;
    double tau;                                 /* s */
    const imw_distribution* spectrum;           /* over omega (rad/s) */
    double omega;                               /* rad/s */
    double gamma;                               /* 1/s */
    double velocity;                            /* m/s */
    double wavelength;                          /* m */
    const imw_distribution* temporal_profile;   /* over t (s) */
    const imw_selection* selection;             /* NULL: preset default */
    const imw_observable* observable;           /* NULL: preset default */
    double epsilon;                             /* default post-selection angle, rad */
    size_t exponential_nodes;
    double exponential_span;
    imw_postselect_options postselect;
} imw_scenario_params;

typedef struct imw_scenario_report {
    imw_scenario_kind kind;
    double slope;
    double physical_shift;
    double physical_shift_formula;
    char unit[8];
    double validity_ratio;
    int weak_ok;
    int no_motion;
    int has_postselection;
    imw_postselection_report postselection;
} imw_scenario_report;

IMWEAK_API const char* imw_scenario_name(imw_scenario_kind kind);
IMWEAK_API imw_status imw_scenario_parse(const char* name, imw_scenario_kind* out);
/* Fills the shipped defaults. The preset spectrum or temporal profile is
 * returned through *owned (NULL for atomic_emission) and referenced from
 * out; the caller destroys it after the last use of out. */
IMWEAK_API imw_status imw_scenario_defaults(imw_scenario_kind kind, imw_scenario_params* out,
                                            imw_distribution** owned);
/* coupling and posterior may be NULL; they are set to NULL when the report
 * has no distributions (doppler with v = 0). */
IMWEAK_API imw_status imw_scenario_run(const imw_scenario_params* params, imw_scenario_report* out,
                                       imw_distribution** coupling, imw_distribution** posterior);

/* Weak value and validity ratio the run would use, without computing the
 * posterior. no_motion is set for doppler with v = 0. */
IMWEAK_API imw_status imw_scenario_preflight(const imw_scenario_params* params, imw_weak_value* weak_value_used,
                                             double* validity_ratio, int* weak_ok, int* no_motion);

#ifdef __cplusplus
}
#endif

#endif /* IMWEAK_IMWEAK_H */
