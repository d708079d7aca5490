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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace imweak::dist {

/// Per-node quadrature weights. On uniform grids the trapezoid rule gets
/// Gregory end corrections through second differences (end weights 3/8,
/// 7/6, 23/24 times h, interior h), exact for cubics. Non-uniform grids
/// fall back to the plain trapezoid rule.
enum class QuadratureRule { trapezoid, gregory };

const char* to_string(QuadratureRule rule);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double std = 0.0;
};

/// Tabulated probability density on a strictly increasing real grid.
/// Immutable; every construction path renormalizes so that sum(w_i f_i) = 1
/// and records the factor that was applied.
class GridDistribution {
public:
    static GridDistribution from_table(std::vector<double> nodes, std::vector<double> values);

    std::size_t size() const { return nodes_.size(); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> densities() const { return densities_; }
    std::span<const double> weights() const { return weights_; }
    QuadratureRule rule() const { return rule_; }

    /// Multiplier applied to the input values to reach unit mass.
    double renormalization_factor() const { return renorm_; }

    /// sum_i w_i g(x_i) f(x_i), with g given node-wise.
    double expectation(std::span<const double> g) const;
    double integral() const;

    Moments moments() const;
    /// Third standardized central moment; 0 for a zero-variance grid.
    double skewness() const;

    /// Piecewise-linear CDF at the nodes from cell-wise trapezoid masses,
    /// scaled so that the last entry is exactly 1.
    std::vector<double> cdf() const;
    /// Inverse of the piecewise-linear CDF, u in [0, 1].
    double quantile(double u) const;

private:
    GridDistribution() = default;

    std::vector<double> nodes_;
    std::vector<double> densities_;
    std::vector<double> weights_;
    std::vector<double> cdf_;
    QuadratureRule rule_ = QuadratureRule::trapezoid;
    double renorm_ = 1.0;
};

GridDistribution gaussian(double mean, double sigma, std::size_t n, double span);
GridDistribution exponential(double rate, std::size_t n, double span);
GridDistribution uniform(double a, double b, std::size_t n);
GridDistribution from_table(std::vector<double> nodes, std::vector<double> values);

/// Distribution of y = a x + b.
GridDistribution affine(const GridDistribution& f, double a, double b);

Moments moments(const GridDistribution& f);

/// Two-column CSV with header "node,density", full round-trip precision.
void write_csv(std::ostream& os, const GridDistribution& f);
GridDistribution read_csv(std::istream& is);
GridDistribution load_csv(const std::filesystem::path& path);

} // namespace imweak::dist
