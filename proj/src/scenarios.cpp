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

#include "imweak/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "imweak/errors.hpp"

namespace imweak::scenarios {

namespace {

constexpr const char* kModule = "scenarios";
constexpr double kSpeedOfLight = 299792458.0;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw Error(ErrorKind::invalid_argument, kModule, std::string(what) + " must be positive");
}

void require_two_level(const HermitianObservable& c) {
    if (c.dim() != 2)
        throw Error(ErrorKind::dimension_mismatch, kModule, "preset observables act on a two-level system");
}

/// Runs the Bayes engine on the mapped coupling and converts back to the
/// physical parameter.
ScenarioReport evaluate(Kind kind, GridDistribution coupling, double slope, const HermitianObservable& c,
                        const std::optional<TwoStateVector>& tsv, const Options& options,
                        double physical_variance, double physical_scale, const char* unit) {
    const double carrier = coupling.moments().mean;
    const TwoStateVector selection = tsv ? *tsv : default_selection(c, carrier, options.epsilon);
    postselect::PostselectionReport rep = postselect::run(coupling, c, selection, options.postselect);

    ScenarioReport out{
        .kind = kind,
        .name = to_string(kind),
        .coupling_distribution = std::move(coupling),
        .postselection = std::nullopt,
        .slope = slope,
        .physical_shift = rep.exact_shift / slope,
        .physical_shift_formula = 2.0 * rep.weak_value_used.im * physical_scale * physical_variance,
        .unit = unit,
        .validity_ratio = rep.validity_ratio,
        .weak_ok = rep.weak_ok,
        .no_motion = false,
    };
    out.postselection = std::move(rep);
    return out;
}

ScenarioReport phase_delay(Kind kind, double tau, const GridDistribution& spectrum,
                           const std::optional<TwoStateVector>& tsv, const std::optional<HermitianObservable>& c,
                           const Options& options) {
    require_positive(tau, "tau");
    const HermitianObservable obs = c ? *c : polarization_projector();
    // d omega = 2 Im C'_w tau Var(omega)
    return evaluate(kind, dist::affine(spectrum, tau, 0.0), tau, obs, tsv, options,
                    spectrum.moments().variance, tau, "rad/s");
}

} // namespace

const char* to_string(Kind kind) {
    switch (kind) {
    case Kind::white_light_phase:
        return "white_light_phase";
    case Kind::michelson_fs:
        return "michelson_fs";
    case Kind::atomic_emission:
        return "atomic_emission";
    case Kind::doppler:
        return "doppler";
    }
    return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) {
    for (Kind k : {Kind::white_light_phase, Kind::michelson_fs, Kind::atomic_emission, Kind::doppler}) {
        if (name == to_string(k))
            return k;
    }
    return std::nullopt;
}

TwoStateVector default_selection(const HermitianObservable& c, double carrier, double epsilon) {
    require_two_level(c);
    const double r = 1.0 / std::numbers::sqrt2;
    const qcore::StateVector pre{r, r};
    const qcore::StateVector rotated = qcore::evolve(c, carrier, pre);
    const double rho = std::arg(rotated[1]) - std::arg(rotated[0]);
    const qcore::StateVector post{r, -r * std::polar(1.0, 2.0 * epsilon + rho)};
    return TwoStateVector(pre, post);
}

HermitianObservable polarization_projector() {
    return HermitianObservable::diagonal({0.0, 1.0});
}

HermitianObservable sublevel_observable() {
    return HermitianObservable::diagonal({1.0, -1.0});
}

ScenarioReport white_light_phase(double tau, const GridDistribution& spectrum,
                                 const std::optional<TwoStateVector>& tsv,
                                 const std::optional<HermitianObservable>& c, const Options& options) {
    return phase_delay(Kind::white_light_phase, tau, spectrum, tsv, c, options);
}

ScenarioReport michelson_fs(double tau, const GridDistribution& spectrum, const std::optional<TwoStateVector>& tsv,
                            const std::optional<HermitianObservable>& c, const Options& options) {
    return phase_delay(Kind::michelson_fs, tau, spectrum, tsv, c, options);
}

ScenarioReport atomic_emission(double omega, double gamma, const std::optional<TwoStateVector>& tsv,
                               const std::optional<HermitianObservable>& c, const Options& options) {
    require_positive(omega, "Omega");
    require_positive(gamma, "Gamma");
    const HermitianObservable obs = c ? *c : sublevel_observable();
    const GridDistribution decay = dist::exponential(gamma, options.exponential_nodes, options.exponential_span);
    // dt = 2 Im C'_w Omega Var(t); Var(t) -> 1 / Gamma^2 as the grid refines
    return evaluate(Kind::atomic_emission, dist::affine(decay, omega, 0.0), omega, obs, tsv, options,
                    decay.moments().variance, omega, "s");
}

ScenarioReport doppler(double velocity, double wavelength, const GridDistribution& temporal_profile,
                       const std::optional<TwoStateVector>& tsv, const std::optional<HermitianObservable>& c,
                       const Options& options) {
    require_positive(wavelength, "lambda");
    if (!std::isfinite(velocity))
        throw Error(ErrorKind::invalid_argument, kModule, "velocity must be finite");
    const double slope = velocity * 2.0 * std::numbers::pi / wavelength;
    if (slope == 0.0) {
        return ScenarioReport{
            .kind = Kind::doppler,
            .name = to_string(Kind::doppler),
            .coupling_distribution = std::nullopt,
            .postselection = std::nullopt,
            .slope = 0.0,
            .physical_shift = 0.0,
            .physical_shift_formula = 0.0,
            .unit = "s",
            .validity_ratio = 0.0,
            .weak_ok = true,
            .no_motion = true,
        };
    }
    const HermitianObservable obs = c ? *c : polarization_projector();
    // dt = 2 Im C_w v (2 pi / lambda) Var(t)
    return evaluate(Kind::doppler, dist::affine(temporal_profile, slope, 0.0), slope, obs, tsv, options,
                    temporal_profile.moments().variance, slope, "s");
}

ScenarioSpec default_spec(Kind kind) {
    ScenarioSpec s;
    s.kind = kind;
    switch (kind) {
    case Kind::white_light_phase: {
        const double omega0 = 2.0 * std::numbers::pi * kSpeedOfLight / 800e-9;
        const double band = 1e14;
        s.tau = 1e-16;
        s.spectrum = dist::uniform(omega0 - 0.5 * band, omega0 + 0.5 * band, 2001);
        break;
    }
    case Kind::michelson_fs: {
        const double omega0 = 2.0 * std::numbers::pi * kSpeedOfLight / 1560e-9;
        s.tau = 1e-16;
        s.spectrum = dist::gaussian(omega0, 2e13, 2001, 8.0);
        break;
    }
    case Kind::atomic_emission:
        s.gamma = 1.0 / 26.2e-9;
        s.omega = 0.005 * s.gamma;
        break;
    case Kind::doppler:
        s.velocity = 5e-4;
        s.wavelength = 633e-9;
        s.temporal_profile = dist::gaussian(0.0, 1e-6, 2001, 8.0);
        break;
    }
    return s;
}

Preflight preflight(const ScenarioSpec& spec) {
    auto need = [](const std::optional<GridDistribution>& d, const char* what) -> const GridDistribution& {
        if (!d)
            throw Error(ErrorKind::invalid_argument, kModule, std::string(what) + " distribution is required");
        return *d;
    };
    double slope = 0.0;
    std::optional<GridDistribution> coupling;
    HermitianObservable obs = spec.observable ? *spec.observable : polarization_projector();
    switch (spec.kind) {
    case Kind::white_light_phase:
    case Kind::michelson_fs:
        require_positive(spec.tau, "tau");
        slope = spec.tau;
        coupling = dist::affine(need(spec.spectrum, "spectrum"), slope, 0.0);
        break;
    case Kind::atomic_emission:
        require_positive(spec.omega, "Omega");
        require_positive(spec.gamma, "Gamma");
        if (!spec.observable)
            obs = sublevel_observable();
        slope = spec.omega;
        coupling = dist::affine(
            dist::exponential(spec.gamma, spec.options.exponential_nodes, spec.options.exponential_span), slope, 0.0);
        break;
    case Kind::doppler: {
        require_positive(spec.wavelength, "lambda");
        const GridDistribution& profile = need(spec.temporal_profile, "temporal profile");
        if (!std::isfinite(spec.velocity))
            throw Error(ErrorKind::invalid_argument, kModule, "velocity must be finite");
        slope = spec.velocity * 2.0 * std::numbers::pi / spec.wavelength;
        if (slope == 0.0)
            return {0.0, {0.0, 0.0}, 0.0, true, true};
        coupling = dist::affine(profile, slope, 0.0);
        break;
    }
    }
    const double carrier = coupling->moments().mean;
    const TwoStateVector tsv = spec.tsv ? *spec.tsv : default_selection(obs, carrier, spec.options.epsilon);
    const double tol = spec.options.postselect.overlap_tolerance;
    const qcore::WeakValue wv = spec.options.postselect.center_on_mean
                                    ? postselect::offset_decomposition(*coupling, obs, tsv, tol).modified_wv
                                    : qcore::weak_value(obs, tsv, tol);
    const postselect::Validity v = postselect::validity(wv, *coupling, spec.options.postselect.validity_threshold);
    return {slope, wv, v.ratio, v.weak_ok, false};
}

ScenarioReport run(const ScenarioSpec& spec) {
    auto need = [](const std::optional<GridDistribution>& d, const char* what) -> const GridDistribution& {
        if (!d)
            throw Error(ErrorKind::invalid_argument, kModule, std::string(what) + " distribution is required");
        return *d;
    };
    switch (spec.kind) {
    case Kind::white_light_phase:
        return white_light_phase(spec.tau, need(spec.spectrum, "spectrum"), spec.tsv, spec.observable, spec.options);
    case Kind::michelson_fs:
        return michelson_fs(spec.tau, need(spec.spectrum, "spectrum"), spec.tsv, spec.observable, spec.options);
    case Kind::atomic_emission:
        return atomic_emission(spec.omega, spec.gamma, spec.tsv, spec.observable, spec.options);
    case Kind::doppler:
        return doppler(spec.velocity, spec.wavelength, need(spec.temporal_profile, "temporal profile"), spec.tsv,
                       spec.observable, spec.options);
    }
    throw Error(ErrorKind::invalid_argument, kModule, "unknown scenario");
}

} // namespace imweak::scenarios
