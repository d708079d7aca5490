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

#include <cstddef>
#include <cstdint>

#include "imweak/dist.hpp"
#include "imweak/qcore.hpp"

namespace imweak::postselect {

using dist::GridDistribution;
using dist::Moments;
using qcore::HermitianObservable;
using qcore::StateVector;
using qcore::TwoStateVector;
using qcore::WeakValue;

inline constexpr double kDefaultValidityThreshold = 0.1;
inline constexpr double kMinPostselectionProbability = 1e-15;

struct Options {
    double overlap_tolerance = qcore::kOverlapTolerance;
    double validity_threshold = kDefaultValidityThreshold;
    /// Use the weak value of the mean-rotated pre-selection |Psi'> for the
    /// first-order prediction (see offset_decomposition).
    bool center_on_mean = true;
};

/// |<Phi| exp(-i k C) |Psi>|^2.
double prob_exact(const HermitianObservable& c, const TwoStateVector& tsv, double k);

/// |<Phi|Psi>|^2 (1 + 2 k Im C_w). Not clamped to [0, 1].
double prob_first_order(const HermitianObservable& c, const TwoStateVector& tsv, double k,
                        double overlap_tol = qcore::kOverlapTolerance);

struct Posterior {
    GridDistribution distribution;
    double avg_probability;
};

/// Bayes update of f with the exact post-selection likelihood.
Posterior posterior(const GridDistribution& f, const HermitianObservable& c, const TwoStateVector& tsv);

double exact_shift(const GridDistribution& f, const HermitianObservable& c, const TwoStateVector& tsv);

/// 2 Im(C_w) Var(f).
double analytic_shift(const WeakValue& wv, const GridDistribution& f);

struct OffsetDecomposition {
    StateVector psi_prime;
    WeakValue modified_wv;
    double analytic_shift_centered;
    double mean_offset;
};

/// Splits exp(-i k C) = exp(-i (k - <k>) C) exp(-i <k> C) and absorbs the
/// known rotation into the pre-selected state.
OffsetDecomposition offset_decomposition(const GridDistribution& f, const HermitianObservable& c,
                                         const TwoStateVector& tsv,
                                         double overlap_tol = qcore::kOverlapTolerance);

struct Validity {
    double ratio;          ///< |Im C_w| * std(f)
    bool weak_ok;          ///< ratio < threshold
    double shift_over_std; ///< |analytic shift| / std(f) = 2 * ratio
};

Validity validity(const WeakValue& wv, const GridDistribution& f,
                  double threshold = kDefaultValidityThreshold);

struct PostselectionReport {
    double avg_probability;
    GridDistribution posterior;
    Moments prior_moments;
    Moments posterior_moments;
    double exact_shift;
    double analytic_shift;
    double validity_ratio;
    WeakValue weak_value_used;
    // diagnostics
    bool weak_ok;
    double validity_threshold;
    double prior_skewness;
    double mean_offset;
};

PostselectionReport run(const GridDistribution& f, const HermitianObservable& c,
                        const TwoStateVector& tsv, const Options& options = {});

struct McOptions {
    std::size_t batch_size = 1u << 16;
    /// 0 selects std::thread::hardware_concurrency(), capped by IMWEAK_THREADS.
    unsigned threads = 0;
};

struct McReport {
    std::uint64_t n_total;
    std::uint64_t n_accepted;
    double accept_fraction;
    double posterior_mean_estimate;
    double standard_error;
    std::uint64_t seed;
};

/// Rejection sampler: k ~ f by inverse CDF, accepted with probability
/// prob_exact(k). Batch b draws from mt19937_64 seeded with (seed, b); batch
/// statistics are merged in batch order, so the report does not depend on
/// the thread count.
McReport mc_run(const GridDistribution& f, const HermitianObservable& c, const TwoStateVector& tsv,
                std::uint64_t n, std::uint64_t seed, const McOptions& options = {});

/// Worker count after applying IMWEAK_THREADS.
unsigned resolve_thread_count(unsigned requested);

} // namespace imweak::postselect
