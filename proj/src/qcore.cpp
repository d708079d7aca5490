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

#include "imweak/qcore.hpp"

#include <cmath>
#include <sstream>

#include "imweak/errors.hpp"

namespace imweak::qcore {

namespace {

constexpr const char* kModule = "qcore";

void require_dims(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw Error(ErrorKind::dimension_mismatch, kModule, os.str());
    }
}

} // namespace

StateVector::StateVector(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0)
        throw Error(ErrorKind::invalid_argument, kModule, "state vector must have dim >= 1");
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
        if (!std::isfinite(amps_[i].real()) || !std::isfinite(amps_[i].imag()))
            throw Error(ErrorKind::invalid_argument, kModule, "state amplitude is not finite");
    }
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector(Eigen::Map<const Eigen::VectorXcd>(amplitudes.begin(),
                                                     static_cast<Eigen::Index>(amplitudes.size()))) {}

StateVector StateVector::normalized(Eigen::VectorXcd amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw Error(ErrorKind::invalid_argument, kModule, "cannot normalize a zero or non-finite vector");
    return StateVector(amplitudes / n);
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim)
        throw Error(ErrorKind::invalid_argument, kModule, "basis index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(std::move(v));
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(norm_squared() - 1.0) <= tol;
}

double HermitianObservable::max_asymmetry(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols())
        return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianObservable::HermitianObservable(Eigen::MatrixXcd entries, double tol) {
    if (entries.rows() == 0 || entries.rows() != entries.cols())
        throw Error(ErrorKind::dimension_mismatch, kModule, "observable must be a non-empty square matrix");
    if (!entries.allFinite())
        throw Error(ErrorKind::invalid_argument, kModule, "observable has non-finite entries");
    const double asym = max_asymmetry(entries);
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    if (asym > tol * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian (max |C_ij - conj(C_ji)| = " << asym << ")";
        throw Error(ErrorKind::not_hermitian, kModule, os.str());
    }
    m_ = 0.5 * (entries + entries.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m_);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::invalid_argument, kModule, "eigendecomposition failed");
    evals_ = solver.eigenvalues();
    evecs_ = solver.eigenvectors();
}

HermitianObservable HermitianObservable::identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return HermitianObservable(Eigen::MatrixXcd::Identity(d, d));
}

HermitianObservable HermitianObservable::diagonal(const std::vector<double>& values) {
    Eigen::VectorXcd diag(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        diag[static_cast<Eigen::Index>(i)] = values[i];
    return HermitianObservable(diag.asDiagonal().toDenseMatrix());
}

HermitianObservable HermitianObservable::pauli_x() {
    Eigen::MatrixXcd m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return HermitianObservable(m);
}

HermitianObservable HermitianObservable::pauli_z() {
    return diagonal({1.0, -1.0});
}

TwoStateVector::TwoStateVector(StateVector pre, StateVector post)
    : pre_(std::move(pre)), post_(std::move(post)) {
    require_dims(pre_.dim(), post_.dim(), "two-state vector");
    if (!pre_.is_normalized() || !post_.is_normalized())
        throw Error(ErrorKind::not_normalized, kModule,
                    "pre- and post-selected states must be normalized");
    overlap_ = inner(post_, pre_);
    if (std::abs(overlap_) == 0.0)
        throw Error(ErrorKind::degenerate_selection, kModule,
                    "pre- and post-selected states are orthogonal");
}

Complex inner(const StateVector& bra, const StateVector& ket) {
    require_dims(bra.dim(), ket.dim(), "inner product");
    return bra.vector().dot(ket.vector());
}

WeakValue weak_value(const HermitianObservable& c, const TwoStateVector& tsv, double overlap_tol) {
    require_dims(c.dim(), tsv.dim(), "weak value");
    const Complex overlap = tsv.overlap();
    if (std::abs(overlap) <= overlap_tol) {
        std::ostringstream os;
        os << "degenerate selection: |<Phi|Psi>| = " << std::abs(overlap)
           << " is below the overlap tolerance " << overlap_tol;
        throw Error(ErrorKind::degenerate_selection, kModule, os.str());
    }
    const Complex num = tsv.post().vector().dot(c.matrix() * tsv.pre().vector());
    const Complex w = num / overlap;
    return {w.real(), w.imag()};
}

StateVector evolve(const HermitianObservable& c, double k, const StateVector& psi) {
    require_dims(c.dim(), psi.dim(), "evolve");
    const Eigen::MatrixXcd& v = c.eigenvectors();
    Eigen::VectorXcd coeffs = v.adjoint() * psi.vector();
    for (Eigen::Index j = 0; j < coeffs.size(); ++j)
        coeffs[j] *= std::polar(1.0, -k * c.eigenvalues()[j]);
    return StateVector(v * coeffs);
}

double expectation(const HermitianObservable& c, const StateVector& psi) {
    require_dims(c.dim(), psi.dim(), "expectation");
    const Complex e = psi.vector().dot(c.matrix() * psi.vector());
    const double scale = std::max(1.0, std::abs(e.real())) * psi.norm_squared();
    if (std::abs(e.imag()) > 1e-12 * scale)
        throw Error(ErrorKind::not_hermitian, kModule, "expectation value has an imaginary part");
    return e.real();
}

TransitionAmplitude::TransitionAmplitude(const HermitianObservable& c, const TwoStateVector& tsv) {
    require_dims(c.dim(), tsv.dim(), "transition amplitude");
    const Eigen::MatrixXcd& v = c.eigenvectors();
    const Eigen::VectorXcd pre = v.adjoint() * tsv.pre().vector();
    const Eigen::VectorXcd post = v.adjoint() * tsv.post().vector();
    for (Eigen::Index j = 0; j < pre.size(); ++j) {
        evals_.push_back(c.eigenvalues()[j]);
        weights_.push_back(std::conj(post[j]) * pre[j]);
    }
}

Complex TransitionAmplitude::operator()(double k) const {
    Complex a{0.0, 0.0};
    for (std::size_t j = 0; j < evals_.size(); ++j)
        a += weights_[j] * std::polar(1.0, -k * evals_[j]);
    return a;
}

} // namespace imweak::qcore
