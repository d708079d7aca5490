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
#include <sstream>

#include <gtest/gtest.h>

#include "imweak/dist.hpp"
#include "imweak/errors.hpp"
#include "test_support.hpp"

using namespace imweak;
using namespace imweak::dist;
using imweak::testing::rel_err;

TEST(Gaussian, MomentsMatchClosedForm) {
    const GridDistribution f = gaussian(0.0, 0.05, 4001, 8.0);
    const Moments m = f.moments();
    EXPECT_NEAR(m.mean, 0.0, 1e-12);
    EXPECT_LT(rel_err(m.variance, 0.0025), 1e-9);
    EXPECT_NEAR(f.integral(), 1.0, 1e-12);
    EXPECT_EQ(f.rule(), QuadratureRule::gregory);
}

TEST(Gaussian, Translation) {
    EXPECT_NEAR(gaussian(1.0, 0.05, 4001, 8.0).moments().mean, 1.0, 1e-12);
}

TEST(Gaussian, RejectsBadParameters) {
    EXPECT_THROW(gaussian(0.0, 0.05, 1, 8.0), Error);
    EXPECT_THROW(gaussian(0.0, 0.05, 4000, 8.0), Error); // even
    EXPECT_THROW(gaussian(0.0, 0.0, 101, 8.0), Error);
    EXPECT_THROW(gaussian(0.0, -1.0, 101, 8.0), Error);
    EXPECT_THROW(gaussian(0.0, 0.05, 101, 5.0), Error);
}

TEST(Gaussian, ThreeNodeGridIsAccepted) {
    // n = 3 is the smallest odd grid; the quadrature collapses to Simpson's rule.
    const GridDistribution f = gaussian(0.0, 0.05, 3, 8.0);
    EXPECT_EQ(f.size(), 3u);
    EXPECT_NEAR(f.weights()[0] / f.weights()[1], 0.25, 1e-15);
}

// Quadrature error of the variance over n in {251, 1001, 4001}. The grid
// already resolves the Gaussian at n = 251, so what is left is the +-8 sigma
// cut plus round-off.
TEST(Gaussian, VarianceErrorDoesNotGrowWithResolution) {
    const double sigma = 0.05;
    const double bias = imweak::testing::gaussian_truncation_bias(8.0);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t n : {251u, 1001u, 4001u}) {
        const double err = rel_err(gaussian(0.0, sigma, n, 8.0).moments().variance, sigma * sigma);
        EXPECT_LT(err, 1e-9) << "n=" << n;
        EXPECT_NEAR(err, bias, imweak::testing::kVarianceRoundoff) << "n=" << n;
        EXPECT_LE(err, previous + imweak::testing::kVarianceRoundoff) << "n=" << n;
        previous = err;
    }
}

// Below the cut floor the grid error is visible and falls with n.
TEST(Gaussian, CoarseGridErrorFallsWithResolution) {
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t n : {21u, 31u, 41u}) {
        const double err = rel_err(gaussian(0.0, 1.0, n, 8.0).moments().variance, 1.0);
        EXPECT_LT(err, previous) << "n=" << n;
        previous = err;
    }
}

TEST(Exponential, MomentsMatchClosedForm) {
    const GridDistribution f = exponential(1.0, 20001, 30.0);
    const Moments m = f.moments();
    EXPECT_NEAR(m.mean, 1.0, 1e-6);
    EXPECT_LT(rel_err(m.variance, 1.0), 1e-5);
    EXPECT_NEAR(exponential(2.0, 20001, 30.0).moments().mean, 0.5, 1e-6);
}

TEST(Exponential, RejectsBadParameters) {
    EXPECT_THROW(exponential(-1.0, 1001, 30.0), Error);
    EXPECT_THROW(exponential(0.0, 1001, 30.0), Error);
    EXPECT_THROW(exponential(1.0, 1001, 10.0), Error);
}

TEST(Uniform, MomentsMatchClosedForm) {
    const Moments m = uniform(0.0, 1.0, 1001).moments();
    EXPECT_NEAR(m.mean, 0.5, 1e-12);
    EXPECT_LT(rel_err(m.variance, 1.0 / 12.0), 1e-9);
    EXPECT_THROW(uniform(1.0, 1.0, 101), Error);
    EXPECT_THROW(uniform(2.0, 1.0, 101), Error);
}

TEST(FromTable, TriangleIsRenormalized) {
    const GridDistribution f = from_table({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    EXPECT_NEAR(f.integral(), 1.0, 1e-15);
    EXPECT_NEAR(f.moments().mean, 1.0, 1e-15);
    EXPECT_GT(f.renormalization_factor(), 0.0);
}

TEST(FromTable, RejectsInvalidTables) {
    EXPECT_THROW(from_table({0.0, 1.0, 2.0}, {0.1, -0.2, 0.1}), Error);
    EXPECT_THROW(from_table({0.0, 2.0, 1.0}, {0.1, 0.2, 0.1}), Error);
    EXPECT_THROW(from_table({0.0, 1.0, 1.0}, {0.1, 0.2, 0.1}), Error);
    EXPECT_THROW(from_table({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}), Error);
    EXPECT_THROW(from_table({0.0, 1.0}, {0.5, 0.5}), Error);
    EXPECT_THROW(from_table({0.0, 1.0, 2.0}, {0.5, 0.5}), Error);
}

TEST(FromTable, NonUniformGridUsesTrapezoid) {
    const GridDistribution f = from_table({0.0, 0.5, 2.0, 3.0}, {1.0, 1.0, 1.0, 1.0});
    EXPECT_EQ(f.rule(), QuadratureRule::trapezoid);
    EXPECT_NEAR(f.densities()[0], 1.0 / 3.0, 1e-15);
}

TEST(Csv, RoundTripReproducesMoments) {
    const GridDistribution f = exponential(3.0, 1001, 25.0);
    std::stringstream ss;
    write_csv(ss, f);
    const GridDistribution g = read_csv(ss);
    ASSERT_EQ(g.size(), f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        EXPECT_EQ(g.nodes()[i], f.nodes()[i]);
    EXPECT_NEAR(g.moments().mean, f.moments().mean, 1e-12);
    EXPECT_NEAR(g.moments().variance, f.moments().variance, 1e-12);
}

TEST(Csv, RequiresHeaderAndTwoColumns) {
    std::istringstream no_header("0,1\n1,1\n2,1\n");
    EXPECT_THROW(read_csv(no_header), Error);
    std::istringstream three_cols("node,density\n0,1,2\n");
    EXPECT_THROW(read_csv(three_cols), Error);
    std::istringstream bad_number("node,density\n0,1\n1,x\n2,1\n");
    EXPECT_THROW(read_csv(bad_number), Error);
    std::istringstream ok("node,density\r\n0,0\r\n1,1\r\n2,0\r\n");
    EXPECT_NEAR(read_csv(ok).moments().mean, 1.0, 1e-15);
    EXPECT_THROW(load_csv("/nonexistent/spectrum.csv"), Error);
}

TEST(Affine, IdentityMap) {
    const GridDistribution f = gaussian(0.3, 0.1, 501, 8.0);
    const GridDistribution g = affine(f, 1.0, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_EQ(g.nodes()[i], f.nodes()[i]);
        EXPECT_NEAR(g.densities()[i], f.densities()[i], 1e-15 * f.densities()[i] + 1e-300);
    }
}

TEST(Affine, ScalingLaw) {
    const GridDistribution g = affine(gaussian(0.0, 1.0, 1001, 8.0), 2.0, 0.0);
    EXPECT_LT(rel_err(g.moments().variance, 4.0), 1e-9);
}

TEST(Affine, ReflectionOfUnitUniform) {
    const GridDistribution f = uniform(0.0, 1.0, 1001);
    const GridDistribution g = affine(f, -1.0, 1.0);
    ASSERT_EQ(g.size(), f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_NEAR(g.nodes()[i], f.nodes()[i], 1e-12);
        EXPECT_NEAR(g.densities()[i], f.densities()[i], 1e-12);
    }
}

TEST(Affine, ZeroSlopeRejected) {
    EXPECT_THROW(affine(uniform(0.0, 1.0, 11), 0.0, 1.0), Error);
}

TEST(Moments, SymmetricDensityIsCentered) {
    const GridDistribution f = from_table({-2.0, -1.0, 0.0, 1.0, 2.0}, {0.1, 0.7, 0.2, 0.7, 0.1});
    EXPECT_NEAR(f.moments().mean, 0.0, 1e-12);
    EXPECT_NEAR(f.skewness(), 0.0, 1e-12);
    const Moments m = f.moments();
    EXPECT_NEAR(m.std * m.std, m.variance, 1e-12 * m.variance);
}

TEST(Moments, NarrowGaussianVariance) {
    const double s = 1e-4;
    EXPECT_LT(rel_err(gaussian(0.0, s, 801, 8.0).moments().variance, s * s), 1e-9);
}

TEST(Moments, ExponentialSkewnessIsTwo) {
    EXPECT_NEAR(exponential(1.0, 20001, 30.0).skewness(), 2.0, 1e-5);
}

TEST(Quantile, InvertsTheCdf) {
    const GridDistribution f = uniform(-1.0, 3.0, 401);
    EXPECT_NEAR(f.quantile(0.0), -1.0, 1e-15);
    EXPECT_NEAR(f.quantile(0.25), 0.0, 1e-12);
    EXPECT_NEAR(f.quantile(1.0), 3.0, 1e-15);
    const std::vector<double> cdf = f.cdf();
    EXPECT_EQ(cdf.front(), 0.0);
    EXPECT_EQ(cdf.back(), 1.0);
}
