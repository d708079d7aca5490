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

#include "imweak/imweak.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>

#include "imweak/dist.hpp"
#include "imweak/errors.hpp"
#include "imweak/metersim.hpp"
#include "imweak/postselect.hpp"
#include "imweak/qcore.hpp"
#include "imweak/scenarios.hpp"

using imweak::Error;
using imweak::ErrorKind;
namespace qcore = imweak::qcore;
namespace dist = imweak::dist;
namespace postselect = imweak::postselect;
namespace metersim = imweak::metersim;
namespace scenarios = imweak::scenarios;

struct imw_observable {
    qcore::HermitianObservable value;
};

struct imw_selection {
    qcore::TwoStateVector value;
};

struct imw_distribution {
    dist::GridDistribution value;
};

struct imw_meter {
    metersim::MeterWavefunction value;
};

namespace {

thread_local std::string last_error;

imw_status to_status(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_argument:
        return IMW_ERR_INVALID_ARGUMENT;
    case ErrorKind::dimension_mismatch:
        return IMW_ERR_DIMENSION_MISMATCH;
    case ErrorKind::not_hermitian:
        return IMW_ERR_NOT_HERMITIAN;
    case ErrorKind::not_normalized:
        return IMW_ERR_NOT_NORMALIZED;
    case ErrorKind::degenerate_selection:
        return IMW_ERR_DEGENERATE_SELECTION;
    case ErrorKind::zero_acceptance:
        return IMW_ERR_ZERO_ACCEPTANCE;
    case ErrorKind::io:
        return IMW_ERR_IO;
    }
    return IMW_ERR_INTERNAL;
}

template <class F>
imw_status guarded(F&& body) noexcept {
    try {
        body();
        return IMW_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return to_status(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "c_api: out of memory";
        return IMW_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = std::string("c_api: ") + e.what();
        return IMW_ERR_INTERNAL;
    } catch (...) {
        last_error = "c_api: unknown exception";
        return IMW_ERR_INTERNAL;
    }
}

void require(const void* p, const char* name) {
    if (p == nullptr)
        throw Error(ErrorKind::invalid_argument, "c_api", std::string("null argument '") + name + "'");
}

Eigen::VectorXcd to_vector(const imw_complex* v, std::size_t dim) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        out[static_cast<Eigen::Index>(i)] = qcore::Complex(v[i].re, v[i].im);
    return out;
}

Eigen::MatrixXcd to_matrix(const imw_complex* m, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd out(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const imw_complex& z = m[r * d + c];
            out(r, c) = qcore::Complex(z.re, z.im);
        }
    }
    return out;
}

void store(const qcore::StateVector& s, imw_complex* out) {
    for (std::size_t i = 0; i < s.dim(); ++i)
        out[i] = {s[i].real(), s[i].imag()};
}

imw_moments to_c(const dist::Moments& m) {
    return {m.mean, m.variance, m.std};
}

imw_weak_value to_c(const qcore::WeakValue& w) {
    return {w.re, w.im};
}

qcore::WeakValue from_c(imw_weak_value w) {
    return {w.re, w.im};
}

postselect::Options from_c(const imw_postselect_options& o) {
    return {o.overlap_tolerance, o.validity_threshold, o.center_on_mean != 0};
}

imw_postselection_report to_c(const postselect::PostselectionReport& r) {
    imw_postselection_report out{};
    out.avg_probability = r.avg_probability;
    out.prior_moments = to_c(r.prior_moments);
    out.posterior_moments = to_c(r.posterior_moments);
    out.exact_shift = r.exact_shift;
    out.analytic_shift = r.analytic_shift;
    out.validity_ratio = r.validity_ratio;
    out.weak_value_used = to_c(r.weak_value_used);
    out.weak_ok = r.weak_ok ? 1 : 0;
    out.validity_threshold = r.validity_threshold;
    out.prior_skewness = r.prior_skewness;
    out.mean_offset = r.mean_offset;
    return out;
}

void emit(imw_distribution** out, dist::GridDistribution d) {
    if (out != nullptr)
        *out = new imw_distribution{std::move(d)};
}

} // namespace

extern "C" {

const char* imw_version(void) {
    return IMWEAK_VERSION_STRING;
}

const char* imw_last_error(void) {
    return last_error.c_str();
}

const char* imw_status_string(imw_status status) {
    switch (status) {
    case IMW_OK:
        return "ok";
    case IMW_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case IMW_ERR_DIMENSION_MISMATCH:
        return "dimension mismatch";
    case IMW_ERR_NOT_HERMITIAN:
        return "not hermitian";
    case IMW_ERR_NOT_NORMALIZED:
        return "not normalized";
    case IMW_ERR_DEGENERATE_SELECTION:
        return "degenerate selection";
    case IMW_ERR_ZERO_ACCEPTANCE:
        return "zero acceptance";
    case IMW_ERR_IO:
        return "i/o error";
    case IMW_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

// ---- qcore ----------------------------------------------------------------

imw_status imw_observable_create(const imw_complex* entries, size_t dim, imw_observable** out) {
    return guarded([&] {
        require(entries, "entries");
        require(out, "out");
        *out = new imw_observable{qcore::HermitianObservable(to_matrix(entries, dim))};
    });
}

void imw_observable_destroy(imw_observable* obs) {
    delete obs;
}

size_t imw_observable_dim(const imw_observable* obs) {
    return obs != nullptr ? obs->value.dim() : 0;
}

imw_status imw_matrix_max_asymmetry(const imw_complex* entries, size_t dim, double* out) {
    return guarded([&] {
        require(entries, "entries");
        require(out, "out");
        *out = qcore::HermitianObservable::max_asymmetry(to_matrix(entries, dim));
    });
}

imw_status imw_selection_create(const imw_complex* pre, const imw_complex* post, size_t dim, imw_selection** out) {
    return guarded([&] {
        require(pre, "pre");
        require(post, "post");
        require(out, "out");
        *out = new imw_selection{
            qcore::TwoStateVector(qcore::StateVector(to_vector(pre, dim)), qcore::StateVector(to_vector(post, dim)))};
    });
}

void imw_selection_destroy(imw_selection* sel) {
    delete sel;
}

size_t imw_selection_dim(const imw_selection* sel) {
    return sel != nullptr ? sel->value.dim() : 0;
}

imw_status imw_selection_overlap(const imw_selection* sel, imw_complex* out) {
    return guarded([&] {
        require(sel, "sel");
        require(out, "out");
        const qcore::Complex o = sel->value.overlap();
        *out = {o.real(), o.imag()};
    });
}

imw_status imw_inner(const imw_complex* bra, const imw_complex* ket, size_t dim, imw_complex* out) {
    return guarded([&] {
        require(bra, "bra");
        require(ket, "ket");
        require(out, "out");
        const qcore::Complex z =
            qcore::inner(qcore::StateVector(to_vector(bra, dim)), qcore::StateVector(to_vector(ket, dim)));
        *out = {z.real(), z.imag()};
    });
}

imw_status imw_compute_weak_value(const imw_observable* obs, const imw_selection* sel, double overlap_tol,
                          imw_weak_value* out) {
    return guarded([&] {
        require(obs, "obs");
        require(sel, "sel");
        require(out, "out");
        *out = to_c(qcore::weak_value(obs->value, sel->value, overlap_tol));
    });
}

imw_status imw_evolve(const imw_observable* obs, double k, const imw_complex* psi, size_t dim, imw_complex* out) {
    return guarded([&] {
        require(obs, "obs");
        require(psi, "psi");
        require(out, "out");
        store(qcore::evolve(obs->value, k, qcore::StateVector(to_vector(psi, dim))), out);
    });
}

imw_status imw_expectation(const imw_observable* obs, const imw_complex* psi, size_t dim, double* out) {
    return guarded([&] {
        require(obs, "obs");
        require(psi, "psi");
        require(out, "out");
        *out = qcore::expectation(obs->value, qcore::StateVector(to_vector(psi, dim)));
    });
}

// ---- dist -----------------------------------------------------------------

imw_status imw_dist_gaussian(double mean, double sigma, size_t n, double span, imw_distribution** out) {
    return guarded([&] {
        require(out, "out");
        emit(out, dist::gaussian(mean, sigma, n, span));
    });
}

imw_status imw_dist_exponential(double rate, size_t n, double span, imw_distribution** out) {
    return guarded([&] {
        require(out, "out");
        emit(out, dist::exponential(rate, n, span));
    });
}

imw_status imw_dist_uniform(double a, double b, size_t n, imw_distribution** out) {
    return guarded([&] {
        require(out, "out");
        emit(out, dist::uniform(a, b, n));
    });
}

imw_status imw_dist_from_table(const double* nodes, const double* values, size_t n, imw_distribution** out) {
    return guarded([&] {
        require(nodes, "nodes");
        require(values, "values");
        require(out, "out");
        emit(out, dist::from_table(std::vector<double>(nodes, nodes + n), std::vector<double>(values, values + n)));
    });
}

imw_status imw_dist_load_csv(const char* path, imw_distribution** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        emit(out, dist::load_csv(path));
    });
}

imw_status imw_dist_write_csv(const imw_distribution* d, const char* path) {
    return guarded([&] {
        require(d, "dist");
        require(path, "path");
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw Error(ErrorKind::io, "dist", std::string("cannot open '") + path + "' for writing");
        dist::write_csv(os, d->value);
        if (!os.flush())
            throw Error(ErrorKind::io, "dist", std::string("write failed for '") + path + "'");
    });
}

imw_status imw_dist_affine(const imw_distribution* d, double a, double b, imw_distribution** out) {
    return guarded([&] {
        require(d, "dist");
        require(out, "out");
        emit(out, dist::affine(d->value, a, b));
    });
}

void imw_dist_destroy(imw_distribution* d) {
    delete d;
}

size_t imw_dist_size(const imw_distribution* d) {
    return d != nullptr ? d->value.size() : 0;
}

imw_status imw_dist_copy(const imw_distribution* d, double* nodes, double* densities, size_t capacity) {
    return guarded([&] {
        require(d, "dist");
        if (capacity < d->value.size())
            throw Error(ErrorKind::invalid_argument, "c_api", "output capacity smaller than distribution size");
        if (nodes != nullptr)
            std::copy(d->value.nodes().begin(), d->value.nodes().end(), nodes);
        if (densities != nullptr)
            std::copy(d->value.densities().begin(), d->value.densities().end(), densities);
    });
}

imw_status imw_dist_moments(const imw_distribution* d, imw_moments* out) {
    return guarded([&] {
        require(d, "dist");
        require(out, "out");
        *out = to_c(d->value.moments());
    });
}

double imw_dist_skewness(const imw_distribution* d) {
    return d != nullptr ? d->value.skewness() : 0.0;
}

double imw_dist_renormalization_factor(const imw_distribution* d) {
    return d != nullptr ? d->value.renormalization_factor() : 0.0;
}

// ---- postselect -----------------------------------------------------------

void imw_postselect_options_default(imw_postselect_options* out) {
    if (out == nullptr)
        return;
    const postselect::Options o;
    *out = {o.overlap_tolerance, o.validity_threshold, o.center_on_mean ? 1 : 0};
}

imw_status imw_prob_exact(const imw_observable* obs, const imw_selection* sel, double k, double* out) {
    return guarded([&] {
        require(obs, "obs");
        require(sel, "sel");
        require(out, "out");
        *out = postselect::prob_exact(obs->value, sel->value, k);
    });
}

imw_status imw_prob_first_order(const imw_observable* obs, const imw_selection* sel, double k, double overlap_tol,
                                double* out) {
    return guarded([&] {
        require(obs, "obs");
        require(sel, "sel");
        require(out, "out");
        *out = postselect::prob_first_order(obs->value, sel->value, k, overlap_tol);
    });
}

imw_status imw_posterior(const imw_distribution* prior, const imw_observable* obs, const imw_selection* sel,
                         imw_distribution** posterior, double* avg_probability) {
    return guarded([&] {
        require(prior, "prior");
        require(obs, "obs");
        require(sel, "sel");
        postselect::Posterior p = postselect::posterior(prior->value, obs->value, sel->value);
        if (avg_probability != nullptr)
            *avg_probability = p.avg_probability;
        emit(posterior, std::move(p.distribution));
    });
}

imw_status imw_exact_shift(const imw_distribution* prior, const imw_observable* obs, const imw_selection* sel,
                           double* out) {
    return guarded([&] {
        require(prior, "prior");
        require(obs, "obs");
        require(sel, "sel");
        require(out, "out");
        *out = postselect::exact_shift(prior->value, obs->value, sel->value);
    });
}

imw_status imw_analytic_shift(imw_weak_value wv, const imw_distribution* prior, double* out) {
    return guarded([&] {
        require(prior, "prior");
        require(out, "out");
        *out = postselect::analytic_shift(from_c(wv), prior->value);
    });
}

imw_status imw_offset_decomposition(const imw_distribution* prior, const imw_observable* obs,
                                    const imw_selection* sel, double overlap_tol, imw_complex* psi_prime,
                                    imw_weak_value* modified_wv, double* analytic_shift_centered) {
    return guarded([&] {
        require(prior, "prior");
        require(obs, "obs");
        require(sel, "sel");
        const postselect::OffsetDecomposition dec =
            postselect::offset_decomposition(prior->value, obs->value, sel->value, overlap_tol);
        if (psi_prime != nullptr)
            store(dec.psi_prime, psi_prime);
        if (modified_wv != nullptr)
            *modified_wv = to_c(dec.modified_wv);
        if (analytic_shift_centered != nullptr)
            *analytic_shift_centered = dec.analytic_shift_centered;
    });
}

imw_status imw_validity(imw_weak_value wv, const imw_distribution* prior, double threshold, double* ratio,
                        int* weak_ok) {
    return guarded([&] {
        require(prior, "prior");
        const postselect::Validity v = postselect::validity(from_c(wv), prior->value, threshold);
        if (ratio != nullptr)
            *ratio = v.ratio;
        if (weak_ok != nullptr)
            *weak_ok = v.weak_ok ? 1 : 0;
    });
}

imw_status imw_postselect_run(const imw_distribution* prior, const imw_observable* obs, const imw_selection* sel,
                              const imw_postselect_options* options, imw_postselection_report* out,
                              imw_distribution** posterior) {
    return guarded([&] {
        require(prior, "prior");
        require(obs, "obs");
        require(sel, "sel");
        require(out, "out");
        const postselect::Options o = options != nullptr ? from_c(*options) : postselect::Options{};
        postselect::PostselectionReport r = postselect::run(prior->value, obs->value, sel->value, o);
        *out = to_c(r);
        emit(posterior, std::move(r.posterior));
    });
}

imw_status imw_mc_run(const imw_distribution* prior, const imw_observable* obs, const imw_selection* sel,
                      uint64_t n, uint64_t seed, unsigned threads, imw_mc_report* out) {
    return guarded([&] {
        require(prior, "prior");
        require(obs, "obs");
        require(sel, "sel");
        require(out, "out");
        postselect::McOptions opts;
        opts.threads = threads;
        const postselect::McReport r = postselect::mc_run(prior->value, obs->value, sel->value, n, seed, opts);
        *out = {r.n_total, r.n_accepted, r.accept_fraction, r.posterior_mean_estimate, r.standard_error, r.seed};
    });
}

// ---- metersim -------------------------------------------------------------

imw_status imw_meter_gaussian(double sigma_p, size_t n, double span, imw_meter** out) {
    return guarded([&] {
        require(out, "out");
        *out = new imw_meter{metersim::gaussian_meter(sigma_p, n, span)};
    });
}

void imw_meter_destroy(imw_meter* meter) {
    delete meter;
}

size_t imw_meter_size(const imw_meter* meter) {
    return meter != nullptr ? meter->value.size() : 0;
}

imw_status imw_meter_postselect(const imw_meter* meter, double k, const imw_observable* obs,
                                const imw_selection* sel, imw_meter** after, double* probability) {
    return guarded([&] {
        require(meter, "meter");
        require(obs, "obs");
        require(sel, "sel");
        require(after, "after");
        metersim::PostselectedMeter r = metersim::postselect_meter(meter->value, k, obs->value, sel->value);
        if (probability != nullptr)
            *probability = r.probability;
        *after = new imw_meter{std::move(r.meter)};
    });
}

imw_status imw_meter_p_shift(const imw_meter* before, const imw_meter* after, double* out) {
    return guarded([&] {
        require(before, "before");
        require(after, "after");
        require(out, "out");
        *out = metersim::p_shift(before->value, after->value);
    });
}

imw_status imw_meter_q_shift(const imw_meter* before, const imw_meter* after, int allow_complex, double* out) {
    return guarded([&] {
        require(before, "before");
        require(after, "after");
        require(out, "out");
        *out = metersim::q_shift(before->value, after->value, allow_complex != 0);
    });
}

imw_status imw_meter_compute_shifts(const imw_meter* before, const imw_meter* after, double k, imw_weak_value wv,
                                  imw_meter_shift_report* out) {
    return guarded([&] {
        require(before, "before");
        require(after, "after");
        require(out, "out");
        const metersim::MeterShiftReport r = metersim::shift_report(before->value, after->value, k, from_c(wv));
        *out = {r.delta_p, r.delta_p_predicted, r.delta_q, r.delta_q_predicted, r.var_p};
    });
}

imw_status imw_meter_density(const imw_meter* meter, imw_distribution** out) {
    return guarded([&] {
        require(meter, "meter");
        require(out, "out");
        emit(out, metersim::density_distribution(meter->value));
    });
}

imw_status imw_meter_write_csv(const imw_meter* meter, const char* path) {
    return guarded([&] {
        require(meter, "meter");
        require(path, "path");
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw Error(ErrorKind::io, "metersim", std::string("cannot open '") + path + "' for writing");
        metersim::write_csv(os, meter->value);
        if (!os.flush())
            throw Error(ErrorKind::io, "metersim", std::string("write failed for '") + path + "'");
    });
}

// ---- scenarios ------------------------------------------------------------

const char* imw_scenario_name(imw_scenario_kind kind) {
    return scenarios::to_string(static_cast<scenarios::Kind>(kind));
}

imw_status imw_scenario_parse(const char* name, imw_scenario_kind* out) {
    return guarded([&] {
        require(name, "name");
        require(out, "out");
        const auto k = scenarios::parse_kind(name);
        if (!k)
            throw Error(ErrorKind::invalid_argument, "scenarios", std::string("unknown scenario '") + name + "'");
        *out = static_cast<imw_scenario_kind>(*k);
    });
}

imw_status imw_scenario_defaults(imw_scenario_kind kind, imw_scenario_params* out, imw_distribution** owned) {
    return guarded([&] {
        require(out, "out");
        require(owned, "owned");
        if (kind < IMW_SCENARIO_WHITE_LIGHT_PHASE || kind > IMW_SCENARIO_DOPPLER)
            throw Error(ErrorKind::invalid_argument, "scenarios", "unknown scenario kind");
        scenarios::ScenarioSpec s = scenarios::default_spec(static_cast<scenarios::Kind>(kind));
        imw_scenario_params p{};
        p.kind = kind;
        p.tau = s.tau;
        p.omega = s.omega;
        p.gamma = s.gamma;
        p.velocity = s.velocity;
        p.wavelength = s.wavelength;
        p.epsilon = s.options.epsilon;
        p.exponential_nodes = s.options.exponential_nodes;
        p.exponential_span = s.options.exponential_span;
        imw_postselect_options_default(&p.postselect);
        *owned = nullptr;
        if (s.spectrum) {
            *owned = new imw_distribution{std::move(*s.spectrum)};
            p.spectrum = *owned;
        } else if (s.temporal_profile) {
            *owned = new imw_distribution{std::move(*s.temporal_profile)};
            p.temporal_profile = *owned;
        }
        *out = p;
    });
}

} // extern "C"

namespace {

scenarios::ScenarioSpec to_spec(const imw_scenario_params& p) {
    if (p.kind < IMW_SCENARIO_WHITE_LIGHT_PHASE || p.kind > IMW_SCENARIO_DOPPLER)
        throw Error(ErrorKind::invalid_argument, "scenarios", "unknown scenario kind");
    scenarios::ScenarioSpec s;
    s.kind = static_cast<scenarios::Kind>(p.kind);
    s.tau = p.tau;
    s.omega = p.omega;
    s.gamma = p.gamma;
    s.velocity = p.velocity;
    s.wavelength = p.wavelength;
    if (p.spectrum != nullptr)
        s.spectrum = p.spectrum->value;
    if (p.temporal_profile != nullptr)
        s.temporal_profile = p.temporal_profile->value;
    if (p.selection != nullptr)
        s.tsv = p.selection->value;
    if (p.observable != nullptr)
        s.observable = p.observable->value;
    s.options.epsilon = p.epsilon;
    s.options.exponential_nodes = p.exponential_nodes;
    s.options.exponential_span = p.exponential_span;
    s.options.postselect = from_c(p.postselect);
    return s;
}

} // namespace

extern "C" {

imw_status imw_scenario_run(const imw_scenario_params* params, imw_scenario_report* out,
                            imw_distribution** coupling, imw_distribution** posterior) {
    if (coupling != nullptr)
        *coupling = nullptr;
    if (posterior != nullptr)
        *posterior = nullptr;
    return guarded([&] {
        require(params, "params");
        require(out, "out");
        const scenarios::ScenarioSpec s = to_spec(*params);
        scenarios::ScenarioReport r = scenarios::run(s);
        imw_scenario_report rep{};
        rep.kind = params->kind;
        rep.slope = r.slope;
        rep.physical_shift = r.physical_shift;
        rep.physical_shift_formula = r.physical_shift_formula;
        std::strncpy(rep.unit, r.unit.c_str(), sizeof rep.unit - 1);
        rep.validity_ratio = r.validity_ratio;
        rep.weak_ok = r.weak_ok ? 1 : 0;
        rep.no_motion = r.no_motion ? 1 : 0;
        rep.has_postselection = r.postselection ? 1 : 0;
        if (r.postselection)
            rep.postselection = to_c(*r.postselection);
        *out = rep;
        if (r.coupling_distribution)
            emit(coupling, std::move(*r.coupling_distribution));
        if (r.postselection)
            emit(posterior, std::move(r.postselection->posterior));
    });
}

imw_status imw_scenario_preflight(const imw_scenario_params* params, imw_weak_value* weak_value_used,
                                  double* validity_ratio, int* weak_ok, int* no_motion) {
    return guarded([&] {
        require(params, "params");
        const scenarios::Preflight pf = scenarios::preflight(to_spec(*params));
        if (weak_value_used != nullptr)
            *weak_value_used = {pf.weak_value_used.re, pf.weak_value_used.im};
        if (validity_ratio != nullptr)
            *validity_ratio = pf.validity_ratio;
        if (weak_ok != nullptr)
            *weak_ok = pf.weak_ok ? 1 : 0;
        if (no_motion != nullptr)
            *no_motion = pf.no_motion ? 1 : 0;
    });
}

} // extern "C"
