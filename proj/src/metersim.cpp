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

#include "imweak/metersim.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fftw3.h>

#include "imweak/errors.hpp"
#include "imweak/postselect.hpp"

namespace imweak::metersim {

namespace {

constexpr const char* kModule = "metersim";
constexpr double kMeterNormTolerance = 1e-9;

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

void require_same_grid(const MeterWavefunction& a, const MeterWavefunction& b) {
    if (a.size() != b.size() || a.p0() != b.p0() || a.dp() != b.dp())
        throw Error(ErrorKind::dimension_mismatch, kModule, "meter states live on different grids");
}

} // namespace

MeterWavefunction::MeterWavefunction(double p0, double dp, std::vector<Complex> amplitudes)
    : p0_(p0), dp_(dp), amps_(std::move(amplitudes)) {
    if (!std::isfinite(p0_) || !(dp_ > 0.0) || !std::isfinite(dp_))
        throw Error(ErrorKind::invalid_argument, kModule, "meter grid needs finite p0 and dp > 0");
    if (amps_.size() < 2)
        throw Error(ErrorKind::invalid_argument, kModule, "meter grid needs at least 2 nodes");
    double norm = 0.0;
    for (const Complex& a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw Error(ErrorKind::invalid_argument, kModule, "meter amplitude is not finite");
        norm += std::norm(a);
    }
    norm *= dp_;
    if (std::abs(norm - 1.0) > kMeterNormTolerance) {
        std::ostringstream os;
        os << "meter wavefunction is not normalized (sum |psi|^2 dp = " << norm << ")";
        throw Error(ErrorKind::not_normalized, kModule, os.str());
    }
}

std::vector<double> MeterWavefunction::nodes() const {
    std::vector<double> p(size());
    for (std::size_t j = 0; j < p.size(); ++j)
        p[j] = node(j);
    return p;
}

std::vector<double> MeterWavefunction::density() const {
    std::vector<double> d(size());
    for (std::size_t j = 0; j < d.size(); ++j)
        d[j] = std::norm(amps_[j]);
    return d;
}

bool MeterWavefunction::is_real(double tol) const {
    double scale = 0.0;
    for (const Complex& a : amps_)
        scale = std::max(scale, std::abs(a));
    for (const Complex& a : amps_) {
        if (std::abs(a.imag()) > tol * scale)
            return false;
    }
    return true;
}

MeterWavefunction gaussian_meter(double sigma_p, std::size_t n, double span) {
    if (!(sigma_p > 0.0) || !std::isfinite(sigma_p))
        throw Error(ErrorKind::invalid_argument, kModule, "gaussian_meter: sigma_p must be positive");
    if (n < 256 || !std::has_single_bit(n))
        throw Error(ErrorKind::invalid_argument, kModule, "gaussian_meter: n must be a power of two >= 256");
    if (!(span >= 8.0))
        throw Error(ErrorKind::invalid_argument, kModule, "gaussian_meter: span must be >= 8 sigma_p");
    const double p0 = -span * sigma_p;
    const double dp = 2.0 * span * sigma_p / static_cast<double>(n);
    std::vector<Complex> amps(n);
    double norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double p = p0 + static_cast<double>(j) * dp;
        const double a = std::exp(-p * p / (4.0 * sigma_p * sigma_p));
        amps[j] = a;
        norm += a * a;
    }
    const double scale = 1.0 / std::sqrt(norm * dp);
    for (Complex& a : amps)
        a *= scale;
    return MeterWavefunction(p0, dp, std::move(amps));
}

PostselectedMeter postselect_meter(const MeterWavefunction& meter, double k, const HermitianObservable& c,
                                   const TwoStateVector& tsv, double overlap_tol) {
    if (std::abs(tsv.overlap()) <= overlap_tol) {
        std::ostringstream os;
        os << "degenerate selection: |<Phi|Psi>| = " << std::abs(tsv.overlap()) << " is below tolerance "
           << overlap_tol;
        throw Error(ErrorKind::degenerate_selection, kModule, os.str());
    }
    const qcore::TransitionAmplitude amp(c, tsv);
    std::vector<Complex> out(meter.size());
    double prob = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = amp(k * meter.node(j)) * meter.amplitudes()[j];
        prob += std::norm(out[j]);
    }
    prob *= meter.dp();
    if (!(prob >= postselect::kMinPostselectionProbability))
        throw Error(ErrorKind::degenerate_selection, kModule, "post-selected meter has vanishing probability");
    const double scale = 1.0 / std::sqrt(prob);
    for (Complex& a : out)
        a *= scale;
    return {MeterWavefunction(meter.p0(), meter.dp(), std::move(out)), prob};
}

double mean_p(const MeterWavefunction& m) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j)
        s += m.node(j) * std::norm(m.amplitudes()[j]);
    return s * m.dp();
}

double variance_p(const MeterWavefunction& m) {
    const double mu = mean_p(m);
    double s = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        const double d = m.node(j) - mu;
        s += d * d * std::norm(m.amplitudes()[j]);
    }
    return s * m.dp();
}

QRepresentation q_representation(const MeterWavefunction& m) {
    const std::size_t n = m.size();
    const int ni = static_cast<int>(n);
    const double dq = 2.0 * std::numbers::pi / (static_cast<double>(n) * m.dp());
    const double q0 = -0.5 * static_cast<double>(n) * dq;

    // exp(i q_m p_j) = exp(i q_m p0) exp(2 pi i m j / n) (-1)^j
    std::vector<Complex> buf(n);
    for (std::size_t j = 0; j < n; ++j)
        buf[j] = (j % 2 == 0 ? 1.0 : -1.0) * m.amplitudes()[j];

    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(ni, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }

    const double pref = m.dp() / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
        const double q = q0 + static_cast<double>(i) * dq;
        buf[i] *= pref * std::polar(1.0, q * m.p0());
    }
    return {q0, dq, std::move(buf)};
}

double mean_q(const MeterWavefunction& m) {
    const QRepresentation rep = q_representation(m);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < rep.amplitudes.size(); ++i) {
        const double w = std::norm(rep.amplitudes[i]);
        num += (rep.q0 + static_cast<double>(i) * rep.dq) * w;
        den += w;
    }
    return num / den;
}

double p_shift(const MeterWavefunction& before, const MeterWavefunction& after) {
    require_same_grid(before, after);
    return mean_p(after) - mean_p(before);
}

double q_shift(const MeterWavefunction& before, const MeterWavefunction& after, bool allow_complex) {
    require_same_grid(before, after);
    if (!allow_complex && !before.is_real())
        throw Error(ErrorKind::invalid_argument, kModule,
                    "q_shift: initial meter is not real-valued; pass allow_complex to override");
    return mean_q(after) - mean_q(before);
}

MeterShiftReport shift_report(const MeterWavefunction& before, const MeterWavefunction& after, double k,
                              const qcore::WeakValue& wv) {
    const double var = variance_p(before);
    return {p_shift(before, after), 2.0 * k * wv.im * var, q_shift(before, after), k * wv.re, var};
}

dist::GridDistribution density_distribution(const MeterWavefunction& m) {
    return dist::from_table(m.nodes(), m.density());
}

void write_csv(std::ostream& os, const MeterWavefunction& m) {
    os << "p,re,im\n";
    char buf[64];
    auto put = [&](double v) {
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        os.write(buf, r.ptr - buf);
    };
    for (std::size_t j = 0; j < m.size(); ++j) {
        put(m.node(j));
        os.put(',');
        put(m.amplitudes()[j].real());
        os.put(',');
        put(m.amplitudes()[j].imag());
        os.put('\n');
    }
}

} // namespace imweak::metersim
