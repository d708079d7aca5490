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
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>

namespace imweak::qcore {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kOverlapTolerance = 1e-10;

/// Amplitude vector of a d-level system. Amplitudes are finite; the vector
/// is not required to be normalized, see is_normalized().
class StateVector {
public:
    explicit StateVector(Eigen::VectorXcd amplitudes);
    StateVector(std::initializer_list<Complex> amplitudes);

    /// Rescales to unit norm. Throws on a zero vector.
    static StateVector normalized(Eigen::VectorXcd amplitudes);
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const Eigen::VectorXcd& vector() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

    double norm_squared() const { return amps_.squaredNorm(); }
    bool is_normalized(double tol = kNormTolerance) const;

    StateVector conjugated() const { return StateVector(amps_.conjugate()); }

private:
    Eigen::VectorXcd amps_;
};

/// Self-adjoint d x d matrix with its spectral decomposition cached at
/// construction. The stored matrix is the exact Hermitian part of the input.
class HermitianObservable {
public:
    explicit HermitianObservable(Eigen::MatrixXcd entries, double tol = kHermitianTolerance);

    static HermitianObservable identity(std::size_t dim);
    static HermitianObservable diagonal(const std::vector<double>& values);
    static HermitianObservable pauli_x();
    static HermitianObservable pauli_z();

    /// Largest |m_ij - conj(m_ji)|.
    static double max_asymmetry(const Eigen::MatrixXcd& m);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    const Eigen::VectorXd& eigenvalues() const { return evals_; }
    const Eigen::MatrixXcd& eigenvectors() const { return evecs_; }

private:
    Eigen::MatrixXcd m_;
    Eigen::VectorXd evals_;
    Eigen::MatrixXcd evecs_;
};

/// Pre-selected |Psi> and post-selected |Phi>, both normalized, with the
/// overlap <Phi|Psi> cached.
class TwoStateVector {
public:
    TwoStateVector(StateVector pre, StateVector post);

    const StateVector& pre() const { return pre_; }
    const StateVector& post() const { return post_; }
    Complex overlap() const { return overlap_; }
    std::size_t dim() const { return pre_.dim(); }

private:
    StateVector pre_;
    StateVector post_;
    Complex overlap_;
};

struct WeakValue {
    double re = 0.0;
    double im = 0.0;

    Complex value() const { return {re, im}; }
};

Complex inner(const StateVector& bra, const StateVector& ket);

/// <Phi|C|Psi> / <Phi|Psi>. Throws ErrorKind::degenerate_selection when
/// |<Phi|Psi>| <= overlap_tol.
WeakValue weak_value(const HermitianObservable& c, const TwoStateVector& tsv,
                     double overlap_tol = kOverlapTolerance);

/// exp(-i k C) |psi> through the eigendecomposition of C.
StateVector evolve(const HermitianObservable& c, double k, const StateVector& psi);

double expectation(const HermitianObservable& c, const StateVector& psi);

/// <Phi| exp(-i k C) |Psi> for many k at the cost of one eigendecomposition.
/// The projections of both states onto the eigenbasis are computed once.
class TransitionAmplitude {
public:
    TransitionAmplitude(const HermitianObservable& c, const TwoStateVector& tsv);

    Complex operator()(double k) const;
    double probability(double k) const { return std::norm((*this)(k)); }

private:
    std::vector<double> evals_;
    std::vector<Complex> weights_;
};

} // namespace imweak::qcore
