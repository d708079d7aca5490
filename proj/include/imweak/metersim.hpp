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

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "imweak/dist.hpp"
#include "imweak/qcore.hpp"

namespace imweak::metersim {

using qcore::Complex;
using qcore::HermitianObservable;
using qcore::TwoStateVector;

/// Meter wavefunction psi(p) on the uniform grid p_j = p0 + j dp, j < n,
/// normalized so that sum |psi_j|^2 dp = 1.
class MeterWavefunction {
public:
    MeterWavefunction(double p0, double dp, std::vector<Complex> amplitudes);

    std::size_t size() const { return amps_.size(); }
    double p0() const { return p0_; }
    double dp() const { return dp_; }
    double node(std::size_t j) const { return p0_ + static_cast<double>(j) * dp_; }
    std::vector<double> nodes() const;
    std::span<const Complex> amplitudes() const { return amps_; }

    /// |psi_j|^2, a density in p.
    std::vector<double> density() const;
    bool is_real(double tol = 1e-12) const;

private:
    double p0_;
    double dp_;
    std::vector<Complex> amps_;
};

/// Real Gaussian amplitude centered at p = 0 with Var(P) = sigma_p^2 on n
/// nodes spanning [-span sigma_p, span sigma_p).
MeterWavefunction gaussian_meter(double sigma_p, std::size_t n, double span);

struct PostselectedMeter {
    MeterWavefunction meter;
    double probability;
};

/// Evolves under H = g(t) P C with integral k, then projects the system onto
/// |Phi>. The interaction is diagonal in p, so the meter amplitude becomes
/// <Phi| exp(-i k p C) |Psi> psi(p).
PostselectedMeter postselect_meter(const MeterWavefunction& meter, double k, const HermitianObservable& c,
                                   const TwoStateVector& tsv, double overlap_tol = qcore::kOverlapTolerance);

double mean_p(const MeterWavefunction& m);
double variance_p(const MeterWavefunction& m);

/// Q-representation phi(q) = (2 pi)^(-1/2) sum_j exp(+i q p_j) psi_j dp on
/// q_m = (m - n/2) dq, dq = 2 pi / (n dp).
struct QRepresentation {
    double q0;
    double dq;
    std::vector<Complex> amplitudes;
};

QRepresentation q_representation(const MeterWavefunction& m);
double mean_q(const MeterWavefunction& m);

double p_shift(const MeterWavefunction& before, const MeterWavefunction& after);

/// <Q>_after - <Q>_before. The first-order Q shift assumes a real initial
/// meter; complex `before` amplitudes are refused unless allow_complex.
double q_shift(const MeterWavefunction& before, const MeterWavefunction& after, bool allow_complex = false);

struct MeterShiftReport {
    double delta_p;
    double delta_p_predicted; ///< 2 k Im C_w Var(P)
    double delta_q;
    double delta_q_predicted; ///< k Re C_w
    double var_p;
};

MeterShiftReport shift_report(const MeterWavefunction& before, const MeterWavefunction& after, double k,
                              const qcore::WeakValue& wv);

/// |psi(p)|^2 as a grid distribution on the meter nodes.
dist::GridDistribution density_distribution(const MeterWavefunction& m);

/// CSV with header "p,re,im".
void write_csv(std::ostream& os, const MeterWavefunction& m);

} // namespace imweak::metersim
