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

#include "imweak/dist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "imweak/errors.hpp"

namespace imweak::dist {

namespace {

constexpr const char* kModule = "dist";
constexpr double kUniformSpacingTolerance = 1e-9;

[[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::invalid_argument, kModule, what);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    x.back() = hi;
    return x;
}

bool is_uniform(const std::vector<double>& x) {
    const double mean_h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (std::abs((x[i + 1] - x[i]) - mean_h) > kUniformSpacingTolerance * mean_h)
            return false;
    }
    return true;
}

std::vector<double> quadrature_weights(const std::vector<double>& x, QuadratureRule rule) {
    const std::size_t n = x.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = x[i + 1] - x[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    if (rule == QuadratureRule::gregory) {
        // -h/12 (grad g_n - delta g_0) - h/24 (grad^2 g_n + delta^2 g_0)
        const double h0 = x[1] - x[0];
        w[0] += -h0 / 12.0 - h0 / 24.0;
        w[1] += h0 / 12.0 + h0 / 12.0;
        w[2] += -h0 / 24.0;
        const double h1 = x[n - 1] - x[n - 2];
        w[n - 1] += -h1 / 12.0 - h1 / 24.0;
        w[n - 2] += h1 / 12.0 + h1 / 12.0;
        w[n - 3] += -h1 / 24.0;
    }
    return w;
}

} // namespace

const char* to_string(QuadratureRule rule) {
    switch (rule) {
    case QuadratureRule::trapezoid:
        return "trapezoid";
    case QuadratureRule::gregory:
        return "gregory";
    }
    return "unknown";
}

GridDistribution GridDistribution::from_table(std::vector<double> nodes, std::vector<double> values) {
    if (nodes.size() != values.size())
        fail("nodes and values differ in length");
    if (nodes.size() < 3)
        fail("a grid distribution needs at least 3 nodes");
    bool any_positive = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!std::isfinite(nodes[i]) || !std::isfinite(values[i]))
            fail("non-finite node or density");
        if (i > 0 && !(nodes[i] > nodes[i - 1]))
            fail("nodes must be strictly increasing");
        if (values[i] < 0.0)
            fail("negative density at node " + std::to_string(i));
        any_positive = any_positive || values[i] > 0.0;
    }
    if (!any_positive)
        fail("all densities are zero");

    GridDistribution f;
    f.rule_ = is_uniform(nodes) ? QuadratureRule::gregory : QuadratureRule::trapezoid;
    f.weights_ = quadrature_weights(nodes, f.rule_);
    double mass = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        mass += f.weights_[i] * values[i];
    if (!(mass > 0.0))
        fail("density has no mass under the quadrature rule");
    f.renorm_ = 1.0 / mass;
    for (double& v : values)
        v *= f.renorm_;
    f.nodes_ = std::move(nodes);
    f.densities_ = std::move(values);

    f.cdf_.assign(f.nodes_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < f.nodes_.size(); ++i) {
        const double h = f.nodes_[i + 1] - f.nodes_[i];
        f.cdf_[i + 1] = f.cdf_[i] + 0.5 * h * (f.densities_[i] + f.densities_[i + 1]);
    }
    const double total = f.cdf_.back();
    for (double& c : f.cdf_)
        c /= total;
    f.cdf_.back() = 1.0;
    return f;
}

double GridDistribution::expectation(std::span<const double> g) const {
    if (g.size() != nodes_.size())
        throw Error(ErrorKind::dimension_mismatch, kModule, "node-wise function has wrong length");
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        s += weights_[i] * densities_[i] * g[i];
    return s;
}

double GridDistribution::integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        s += weights_[i] * densities_[i];
    return s;
}

Moments GridDistribution::moments() const {
    double mean = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        mean += weights_[i] * densities_[i] * nodes_[i];
    double var = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double d = nodes_[i] - mean;
        var += weights_[i] * densities_[i] * d * d;
    }
    // Central two-pass form with positive weights; cannot go below zero.
    var = std::max(var, 0.0);
    return {mean, var, std::sqrt(var)};
}

double GridDistribution::skewness() const {
    const Moments m = moments();
    if (m.variance == 0.0)
        return 0.0;
    double third = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double d = nodes_[i] - m.mean;
        third += weights_[i] * densities_[i] * d * d * d;
    }
    return third / (m.variance * m.std);
}

std::vector<double> GridDistribution::cdf() const {
    return cdf_;
}

double GridDistribution::quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end())
        return nodes_.back();
    const auto hi = static_cast<std::size_t>(it - cdf_.begin());
    const std::size_t lo = hi - 1;
    const double span = cdf_[hi] - cdf_[lo];
    const double t = span > 0.0 ? (u - cdf_[lo]) / span : 0.0;
    return nodes_[lo] + t * (nodes_[hi] - nodes_[lo]);
}

GridDistribution gaussian(double mean, double sigma, std::size_t n, double span) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        fail("gaussian: sigma must be positive");
    if (!std::isfinite(mean))
        fail("gaussian: mean must be finite");
    if (n < 3 || n % 2 == 0)
        fail("gaussian: n must be odd and >= 3");
    if (!(span >= 6.0))
        fail("gaussian: span must be >= 6 sigma");
    std::vector<double> x = linspace(mean - span * sigma, mean + span * sigma, n);
    std::vector<double> f(n);
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (x[i] - mean) / sigma;
        f[i] = norm * std::exp(-0.5 * z * z);
    }
    return GridDistribution::from_table(std::move(x), std::move(f));
}

GridDistribution exponential(double rate, std::size_t n, double span) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        fail("exponential: rate must be positive");
    if (n < 3)
        fail("exponential: n must be >= 3");
    if (!(span >= 20.0))
        fail("exponential: span must be >= 20 mean lifetimes");
    std::vector<double> t = linspace(0.0, span / rate, n);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = rate * std::exp(-rate * t[i]);
    return GridDistribution::from_table(std::move(t), std::move(f));
}

GridDistribution uniform(double a, double b, std::size_t n) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        fail("uniform: requires a < b");
    if (n < 3)
        fail("uniform: n must be >= 3");
    return GridDistribution::from_table(linspace(a, b, n), std::vector<double>(n, 1.0 / (b - a)));
}

GridDistribution from_table(std::vector<double> nodes, std::vector<double> values) {
    return GridDistribution::from_table(std::move(nodes), std::move(values));
}

GridDistribution affine(const GridDistribution& f, double a, double b) {
    if (a == 0.0)
        fail("affine: slope a = 0 maps onto a point mass");
    if (!std::isfinite(a) || !std::isfinite(b))
        fail("affine: non-finite coefficients");
    const std::size_t n = f.size();
    std::vector<double> y(n);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = a > 0.0 ? i : n - 1 - i;
        y[i] = a * f.nodes()[src] + b;
        g[i] = f.densities()[src] / std::abs(a);
    }
    return GridDistribution::from_table(std::move(y), std::move(g));
}

Moments moments(const GridDistribution& f) {
    return f.moments();
}

void write_csv(std::ostream& os, const GridDistribution& f) {
    os << "node,density\n";
    char buf[64];
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto r = std::to_chars(buf, buf + sizeof buf, f.nodes()[i]);
        os.write(buf, r.ptr - buf);
        os.put(',');
        r = std::to_chars(buf, buf + sizeof buf, f.densities()[i]);
        os.write(buf, r.ptr - buf);
        os.put('\n');
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& field, std::size_t line) {
    double v = 0.0;
    const std::string t = trim(field);
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc{} || r.ptr != t.data() + t.size()) {
        throw Error(ErrorKind::io, kModule,
                    "csv line " + std::to_string(line) + ": cannot parse number '" + t + "'");
    }
    return v;
}

} // namespace

GridDistribution read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw Error(ErrorKind::io, kModule, "csv: empty input");
    if (trim(line).rfind('\xEF', 0) == 0) // UTF-8 BOM
        line = line.substr(3);
    if (trim(line) != "node,density")
        throw Error(ErrorKind::io, kModule, "csv: expected header 'node,density'");
    std::vector<double> nodes;
    std::vector<double> values;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw Error(ErrorKind::io, kModule, "csv line " + std::to_string(lineno) + ": expected two columns");
        nodes.push_back(parse_double(line.substr(0, comma), lineno));
        values.push_back(parse_double(line.substr(comma + 1), lineno));
    }
    return GridDistribution::from_table(std::move(nodes), std::move(values));
}

GridDistribution load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, kModule, "cannot open csv file '" + path.string() + "'");
    return read_csv(in);
}

} // namespace imweak::dist
