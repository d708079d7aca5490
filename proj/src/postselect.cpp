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

#include "imweak/postselect.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "imweak/errors.hpp"

namespace imweak::postselect {

namespace {

constexpr const char* kModule = "postselect";

std::vector<double> likelihood(const GridDistribution& f, const qcore::TransitionAmplitude& amp) {
    std::vector<double> l(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        l[i] = amp.probability(f.nodes()[i]);
    return l;
}

/// Running count/mean/M2 (Welford), merged with Chan's pairwise update.
struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.count == 0)
            return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(o.count);
        const double n = na + nb;
        const double d = o.mean - mean;
        mean += d * nb / n;
        m2 += o.m2 + d * d * na * nb / n;
        count += o.count;
    }
};

double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace

double prob_exact(const HermitianObservable& c, const TwoStateVector& tsv, double k) {
    const StateVector evolved = qcore::evolve(c, k, tsv.pre());
    return std::clamp(std::norm(qcore::inner(tsv.post(), evolved)), 0.0, 1.0);
}

double prob_first_order(const HermitianObservable& c, const TwoStateVector& tsv, double k, double overlap_tol) {
    const WeakValue wv = qcore::weak_value(c, tsv, overlap_tol);
    return std::norm(tsv.overlap()) * (1.0 + 2.0 * k * wv.im);
}

Posterior posterior(const GridDistribution& f, const HermitianObservable& c, const TwoStateVector& tsv) {
    const qcore::TransitionAmplitude amp(c, tsv);
    std::vector<double> l = likelihood(f, amp);
    const double avg = f.expectation(l);
    if (!(avg >= kMinPostselectionProbability)) {
        std::ostringstream os;
        os << "post-selection probability P(Phi) = " << avg << " vanishes; the post-selection never succeeds";
        throw Error(ErrorKind::degenerate_selection, kModule, os.str());
    }
    std::vector<double> nodes(f.nodes().begin(), f.nodes().end());
    for (std::size_t i = 0; i < l.size(); ++i)
        l[i] = f.densities()[i] * l[i] / avg;
    return {dist::from_table(std::move(nodes), std::move(l)), std::min(avg, 1.0)};
}

double exact_shift(const GridDistribution& f, const HermitianObservable& c, const TwoStateVector& tsv) {
    const Posterior post = posterior(f, c, tsv);
    return post.distribution.moments().mean - f.moments().mean;
}

double analytic_shift(const WeakValue& wv, const GridDistribution& f) {
    return 2.0 * wv.im * f.moments().variance;
}

OffsetDecomposition offset_decomposition(const GridDistribution& f, const HermitianObservable& c,
                                         const TwoStateVector& tsv, double overlap_tol) {
    const Moments m = f.moments();
    StateVector psi_prime = qcore::evolve(c, m.mean, tsv.pre());
    const qcore::Complex overlap = qcore::inner(tsv.post(), psi_prime);
    if (std::abs(overlap) <= overlap_tol) {
        std::ostringstream os;
        os << "degenerate selection: rotating |Psi> by the mean offset <k> = " << m.mean
           << " leaves |<Phi|Psi'>| = " << std::abs(overlap) << " below tolerance " << overlap_tol;
        throw Error(ErrorKind::degenerate_selection, kModule, os.str());
    }
    const TwoStateVector shifted(psi_prime, tsv.post());
    const WeakValue wv = qcore::weak_value(c, shifted, overlap_tol);
    return {std::move(psi_prime), wv, 2.0 * wv.im * m.variance, m.mean};
}

Validity validity(const WeakValue& wv, const GridDistribution& f, double threshold) {
    const double ratio = std::abs(wv.im) * f.moments().std;
    return {ratio, ratio < threshold, 2.0 * ratio};
}

PostselectionReport run(const GridDistribution& f, const HermitianObservable& c, const TwoStateVector& tsv,
                        const Options& options) {
    const Moments prior = f.moments();
    WeakValue wv;
    double offset = 0.0;
    if (options.center_on_mean) {
        const OffsetDecomposition dec = offset_decomposition(f, c, tsv, options.overlap_tolerance);
        wv = dec.modified_wv;
        offset = dec.mean_offset;
    } else {
        wv = qcore::weak_value(c, tsv, options.overlap_tolerance);
    }
    Posterior post = posterior(f, c, tsv);
    const Moments post_moments = post.distribution.moments();
    const Validity v = validity(wv, f, options.validity_threshold);
    return PostselectionReport{
        .avg_probability = post.avg_probability,
        .posterior = std::move(post.distribution),
        .prior_moments = prior,
        .posterior_moments = post_moments,
        .exact_shift = post_moments.mean - prior.mean,
        .analytic_shift = analytic_shift(wv, f),
        .validity_ratio = v.ratio,
        .weak_value_used = wv,
        .weak_ok = v.weak_ok,
        .validity_threshold = options.validity_threshold,
        .prior_skewness = f.skewness(),
        .mean_offset = offset,
    };
}

unsigned resolve_thread_count(unsigned requested) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("IMWEAK_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0)
            n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

McReport mc_run(const GridDistribution& f, const HermitianObservable& c, const TwoStateVector& tsv,
                std::uint64_t n, std::uint64_t seed, const McOptions& options) {
    if (n < 1000)
        throw Error(ErrorKind::invalid_argument, kModule, "mc_run: n must be >= 1000");
    if (options.batch_size == 0)
        throw Error(ErrorKind::invalid_argument, kModule, "mc_run: batch size must be positive");

    const qcore::TransitionAmplitude amp(c, tsv);
    const std::uint64_t batch = options.batch_size;
    const std::uint64_t n_batches = (n + batch - 1) / batch;
    std::vector<RunningStats> stats(n_batches);

    auto run_batch = [&](std::uint64_t b) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
        std::mt19937_64 gen(seq);
        const std::uint64_t count = std::min(batch, n - b * batch);
        RunningStats s;
        for (std::uint64_t i = 0; i < count; ++i) {
            const double k = f.quantile(unit_uniform(gen));
            if (unit_uniform(gen) < amp.probability(k))
                s.push(k);
        }
        stats[b] = s;
    };

    const unsigned workers = std::min<std::uint64_t>(resolve_thread_count(options.threads), n_batches);
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < n_batches; ++b)
            run_batch(b);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t b = next++; b < n_batches; b = next++)
                    run_batch(b);
            });
        }
    }

    RunningStats total;
    for (const RunningStats& s : stats)
        total.merge(s);
    if (total.count == 0)
        throw Error(ErrorKind::zero_acceptance, kModule, "mc_run: no sample passed the post-selection");

    const double se = total.count >= 2
        ? std::sqrt(total.m2 / static_cast<double>(total.count - 1)) / std::sqrt(static_cast<double>(total.count))
        : 0.0;
    return {n, total.count, static_cast<double>(total.count) / static_cast<double>(n), total.mean, se, seed};
}

} // namespace imweak::postselect
