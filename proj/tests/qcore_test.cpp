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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "imweak/errors.hpp"
#include "imweak/qcore.hpp"
#include "test_support.hpp"

using namespace imweak;
using namespace imweak::qcore;
using imweak::testing::kInvSqrt2;

namespace {

void expect_state_near(const StateVector& got, const Eigen::VectorXcd& want, double tol) {
    ASSERT_EQ(got.dim(), static_cast<std::size_t>(want.size()));
    for (std::size_t i = 0; i < got.dim(); ++i) {
        EXPECT_NEAR(got[i].real(), want[static_cast<Eigen::Index>(i)].real(), tol) << "i=" << i;
        EXPECT_NEAR(got[i].imag(), want[static_cast<Eigen::Index>(i)].imag(), tol) << "i=" << i;
    }
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected imweak::Error";
    return ErrorKind::io;
}

} // namespace

TEST(Inner, NormalizedStateHasUnitNorm) {
    const StateVector psi{Complex(0.6, 0.0), Complex(0.0, 0.8)};
    const Complex n = inner(psi, psi);
    EXPECT_NEAR(n.real(), 1.0, 1e-15);
    EXPECT_NEAR(n.imag(), 0.0, 1e-15);
}

TEST(Inner, OrthogonalBasisVectors) {
    EXPECT_EQ(inner(StateVector{1.0, 0.0}, StateVector{0.0, 1.0}), Complex(0.0, 0.0));
}

TEST(Inner, ConjugatesTheBra) {
    const StateVector bra{kInvSqrt2, Complex(0.0, -kInvSqrt2)};
    const StateVector ket{kInvSqrt2, kInvSqrt2};
    const Complex z = inner(bra, ket);
    EXPECT_NEAR(z.real(), 0.5, 1e-15);
    EXPECT_NEAR(z.imag(), 0.5, 1e-15);
}

TEST(Inner, DimensionMismatch) {
    EXPECT_EQ(kind_of([] { inner(StateVector{1.0, 0.0}, StateVector{1.0, 0.0, 0.0}); }),
              ErrorKind::dimension_mismatch);
}

TEST(WeakValue, IdentityIsOne) {
    std::mt19937_64 rng(7);
    const TwoStateVector tsv = imweak::testing::random_selection(rng, 3);
    const WeakValue w = weak_value(HermitianObservable::identity(3), tsv);
    EXPECT_NEAR(w.re, 1.0, 1e-14);
    EXPECT_NEAR(w.im, 0.0, 1e-14);
}

TEST(WeakValue, EqualPrePostGivesExpectation) {
    std::mt19937_64 rng(11);
    const StateVector psi = imweak::testing::random_state(rng, 3);
    const HermitianObservable c(imweak::testing::random_hermitian_matrix(rng, 3));
    const WeakValue w = weak_value(c, TwoStateVector(psi, psi));
    EXPECT_NEAR(w.re, expectation(c, psi), 1e-12);
    EXPECT_NEAR(w.im, 0.0, 1e-12);
}

TEST(WeakValue, CanonicalQubit) {
    const WeakValue w = weak_value(imweak::testing::canonical_observable(), imweak::testing::canonical_selection());
    EXPECT_NEAR(w.re, 0.5, 1e-15);
    EXPECT_NEAR(w.im, 0.5, 1e-15);
    const Complex brute = imweak::testing::brute_weak_value(imweak::testing::canonical_observable().matrix(),
                                                            imweak::testing::canonical_selection().pre().vector(),
                                                            imweak::testing::canonical_selection().post().vector());
    EXPECT_NEAR(w.re, brute.real(), 1e-15);
    EXPECT_NEAR(w.im, brute.imag(), 1e-15);
}

TEST(WeakValue, NearOrthogonalSelectionRejected) {
    const double eps = 1e-12;
    const StateVector pre{1.0, 0.0};
    const StateVector post{eps, std::sqrt(1.0 - eps * eps)};
    const TwoStateVector tsv(pre, post);
    EXPECT_EQ(kind_of([&] { weak_value(HermitianObservable::pauli_x(), tsv); }), ErrorKind::degenerate_selection);
    // a looser tolerance accepts it
    EXPECT_NO_THROW(weak_value(HermitianObservable::pauli_x(), tsv, 1e-13));
}

TEST(TwoStateVector, RequiresNormalizedNonOrthogonalStates) {
    EXPECT_EQ(kind_of([] { TwoStateVector(StateVector{1.0, 1.0}, StateVector{1.0, 0.0}); }),
              ErrorKind::not_normalized);
    EXPECT_EQ(kind_of([] { TwoStateVector(StateVector{1.0, 0.0}, StateVector{0.0, 1.0}); }),
              ErrorKind::degenerate_selection);
    const TwoStateVector tsv = imweak::testing::canonical_selection();
    EXPECT_NEAR(std::abs(tsv.overlap() - inner(tsv.post(), tsv.pre())), 0.0, 1e-15);
}

TEST(Evolve, ZeroCouplingIsIdentity) {
    std::mt19937_64 rng(3);
    const StateVector psi = imweak::testing::random_state(rng, 4);
    const HermitianObservable c(imweak::testing::random_hermitian_matrix(rng, 4));
    expect_state_near(evolve(c, 0.0, psi), psi.vector(), 1e-14);
}

TEST(Evolve, DiagonalProjectorPhasesSecondComponent) {
    const StateVector psi{Complex(0.6, 0.0), Complex(0.0, 0.8)};
    const double k = 0.37;
    Eigen::VectorXcd want(2);
    want << Complex(0.6, 0.0), std::polar(1.0, -k) * Complex(0.0, 0.8);
    expect_state_near(evolve(HermitianObservable::diagonal({0.0, 1.0}), k, psi), want, 1e-15);
}

TEST(Evolve, RabiRotation) {
    Eigen::VectorXcd want(2);
    want << 0.0, Complex(0.0, -1.0);
    expect_state_near(evolve(HermitianObservable::pauli_x(), std::numbers::pi / 2, StateVector{1.0, 0.0}), want,
                      1e-15);
}

TEST(Evolve, MatchesPadeExponential) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXcd m = imweak::testing::random_hermitian_matrix(rng, 2 + trial % 3);
        const StateVector psi = imweak::testing::random_state(rng, 2 + trial % 3);
        const double k = -3.0 + 0.3 * trial;
        expect_state_near(evolve(HermitianObservable(m), k, psi), imweak::testing::pade_evolve(m, k, psi.vector()),
                          1e-11);
    }
}

TEST(Evolve, RejectsNonHermitian) {
    Eigen::MatrixXcd m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    EXPECT_EQ(kind_of([&] { HermitianObservable{m}; }), ErrorKind::not_hermitian);
    EXPECT_DOUBLE_EQ(HermitianObservable::max_asymmetry(m), 1.0);
}

TEST(Expectation, Examples) {
    const StateVector plus{kInvSqrt2, kInvSqrt2};
    EXPECT_NEAR(expectation(HermitianObservable::identity(2), plus), 1.0, 1e-15);
    EXPECT_NEAR(expectation(HermitianObservable::diagonal({0.0, 1.0}), plus), 0.5, 1e-15);
    EXPECT_NEAR(expectation(HermitianObservable::pauli_x(), plus), 1.0, 1e-15);
}

TEST(TransitionAmplitude, AgreesWithEvolve) {
    std::mt19937_64 rng(13);
    const HermitianObservable c(imweak::testing::random_hermitian_matrix(rng, 3));
    const TwoStateVector tsv = imweak::testing::random_selection(rng, 3);
    const TransitionAmplitude amp(c, tsv);
    for (double k : {-2.0, -0.1, 0.0, 0.4, 3.0}) {
        const Complex direct = inner(tsv.post(), evolve(c, k, tsv.pre()));
        EXPECT_NEAR(std::abs(amp(k) - direct), 0.0, 1e-14) << "k=" << k;
    }
}

TEST(StateVector, RejectsNonFiniteAndEmpty) {
    EXPECT_EQ(kind_of([] { StateVector{std::nan(""), 0.0}; }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind_of([] { StateVector(Eigen::VectorXcd(0)); }), ErrorKind::invalid_argument);
    EXPECT_EQ(kind_of([] { StateVector::normalized(Eigen::VectorXcd::Zero(2)); }), ErrorKind::invalid_argument);
}
