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

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "imweak/dist.hpp"
#include "imweak/postselect.hpp"
#include "imweak/qcore.hpp"

namespace imweak::scenarios {

using dist::GridDistribution;
using qcore::HermitianObservable;
using qcore::TwoStateVector;

enum class Kind { white_light_phase, michelson_fs, atomic_emission, doppler };

const char* to_string(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);

inline constexpr double kDefaultEpsilon = 0.1;

struct Options {
    /// Angle (rad) of the default post-selection away from orthogonality.
    double epsilon = kDefaultEpsilon;
    postselect::Options postselect;
    /// Grid for the decay-time distribution of atomic_emission.
    std::size_t exponential_nodes = 20001;
    double exponential_span = 30.0;
};

/// Pre-selection (|0> + |1>)/sqrt(2) and post-selection
/// (|0> - exp(i(2 eps + rho))|1>)/sqrt(2), where rho is the relative phase
/// that exp(-i carrier C) puts on the pre-selection. For C diagonal in the
/// computational basis this fixes <Phi|Psi'> at i exp(-i eps) sin(eps), so the
/// projector onto |1> has weak value 1/2 + i cot(eps)/2 whatever the carrier.
/// Two-level systems only.
TwoStateVector default_selection(const HermitianObservable& c, double carrier, double epsilon);

/// Projector onto |1>, the polarization observable of the optical presets.
HermitianObservable polarization_projector();
/// diag(1, -1), the magnetic-sublevel observable of atomic_emission.
HermitianObservable sublevel_observable();

struct ScenarioReport {
    Kind kind;
    std::string name;
    /// Absent when the coupling collapses to a point (doppler with v = 0).
    std::optional<GridDistribution> coupling_distribution;
    std::optional<postselect::PostselectionReport> postselection;
    double slope;          ///< d k / d (physical parameter)
    double physical_shift; ///< exact_shift / slope
    double physical_shift_formula;
    std::string unit;      ///< "rad/s" for a frequency shift, "s" for a time shift
    double validity_ratio;
    bool weak_ok;
    bool no_motion;
};

/// k = omega tau; reports the spectral shift d omega.
ScenarioReport white_light_phase(double tau, const GridDistribution& spectrum,
                                 const std::optional<TwoStateVector>& tsv = std::nullopt,
                                 const std::optional<HermitianObservable>& c = std::nullopt,
                                 const Options& options = {});

/// Same analysis as white_light_phase; only the preset spectrum differs.
ScenarioReport michelson_fs(double tau, const GridDistribution& spectrum,
                            const std::optional<TwoStateVector>& tsv = std::nullopt,
                            const std::optional<HermitianObservable>& c = std::nullopt,
                            const Options& options = {});

/// k = Omega t with t ~ Exp(Gamma); reports the decay-time shift dt.
ScenarioReport atomic_emission(double omega, double gamma,
                               const std::optional<TwoStateVector>& tsv = std::nullopt,
                               const std::optional<HermitianObservable>& c = std::nullopt,
                               const Options& options = {});

/// k = v t 2 pi / lambda; reports the arrival-time shift dt.
ScenarioReport doppler(double velocity, double wavelength, const GridDistribution& temporal_profile,
                       const std::optional<TwoStateVector>& tsv = std::nullopt,
                       const std::optional<HermitianObservable>& c = std::nullopt,
                       const Options& options = {});

/// Physical inputs of one preset. Unused fields are ignored by the others.
struct ScenarioSpec {
    Kind kind = Kind::white_light_phase;
    double tau = 0.0;                          ///< s
    std::optional<GridDistribution> spectrum;  ///< over omega, rad/s
    double omega = 0.0;                        ///< rad/s
    double gamma = 0.0;                        ///< 1/s
    double velocity = 0.0;                     ///< m/s
    double wavelength = 0.0;                   ///< m
    std::optional<GridDistribution> temporal_profile; ///< over t, s
    std::optional<TwoStateVector> tsv;
    std::optional<HermitianObservable> observable;
    Options options;
};

/// Shipped defaults: an 800 nm LED with a flat 1e14 rad/s band and a 0.1 fs
/// delay; a 1560 nm femtosecond source with a Gaussian spectrum; a 26 ns
/// excited state with Omega / Gamma = 0.005; a 633 nm Doppler probe with a
/// 1 us Gaussian pulse and a 0.5 mm/s mirror.
ScenarioSpec default_spec(Kind kind);

ScenarioReport run(const ScenarioSpec& spec);

/// Weak value and validity ratio a run would use, without the posterior.
struct Preflight {
    double slope;
    qcore::WeakValue weak_value_used;
    double validity_ratio;
    bool weak_ok;
    bool no_motion;
};

Preflight preflight(const ScenarioSpec& spec);

} // namespace imweak::scenarios
