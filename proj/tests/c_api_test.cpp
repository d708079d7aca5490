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
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "imweak/imweak.h"

namespace {

const double kR = 1.0 / std::sqrt(2.0);

struct Canonical {
    imw_observable* obs = nullptr;
    imw_selection* sel = nullptr;

    Canonical() {
        const imw_complex c[4] = {{0, 0}, {0, 0}, {0, 0}, {1, 0}};
        const imw_complex pre[2] = {{kR, 0}, {kR, 0}};
        const imw_complex post[2] = {{kR, 0}, {0, -kR}};
        EXPECT_EQ(imw_observable_create(c, 2, &obs), IMW_OK);
        EXPECT_EQ(imw_selection_create(pre, post, 2, &sel), IMW_OK);
    }
    ~Canonical() {
        imw_observable_destroy(obs);
        imw_selection_destroy(sel);
    }
};

} // namespace

TEST(CApi, VersionAndStatusStrings) {
    EXPECT_STRNE(imw_version(), "");
    EXPECT_STREQ(imw_status_string(IMW_OK), "ok");
    EXPECT_STRNE(imw_status_string(IMW_ERR_DEGENERATE_SELECTION), imw_status_string(IMW_ERR_ZERO_ACCEPTANCE));
}

TEST(CApi, WeakValue) {
    Canonical c;
    imw_weak_value wv{};
    ASSERT_EQ(imw_compute_weak_value(c.obs, c.sel, 1e-10, &wv), IMW_OK);
    EXPECT_NEAR(wv.re, 0.5, 1e-12);
    EXPECT_NEAR(wv.im, 0.5, 1e-12);
    EXPECT_EQ(imw_observable_dim(c.obs), 2u);
    EXPECT_EQ(imw_selection_dim(c.sel), 2u);
}

TEST(CApi, ErrorsCarryStatusAndMessage) {
    const imw_complex bad[4] = {{0, 0}, {1, 0}, {0, 0}, {1, 0}};
    imw_observable* obs = nullptr;
    EXPECT_EQ(imw_observable_create(bad, 2, &obs), IMW_ERR_NOT_HERMITIAN);
    EXPECT_EQ(obs, nullptr);
    EXPECT_NE(std::string(imw_last_error()).find("qcore:"), std::string::npos);

    const imw_complex pre[2] = {{1, 0}, {0, 0}};
    const imw_complex post[2] = {{0, 0}, {1, 0}};
    imw_selection* sel = nullptr;
    EXPECT_EQ(imw_selection_create(pre, post, 2, &sel), IMW_ERR_DEGENERATE_SELECTION);
    const imw_complex unnormalized[2] = {{1, 0}, {1, 0}};
    EXPECT_EQ(imw_selection_create(unnormalized, pre, 2, &sel), IMW_ERR_NOT_NORMALIZED);
    EXPECT_EQ(imw_observable_create(nullptr, 2, &obs), IMW_ERR_INVALID_ARGUMENT);

    imw_distribution* d = nullptr;
    EXPECT_EQ(imw_dist_gaussian(0.0, -1.0, 101, 8.0, &d), IMW_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(imw_dist_load_csv("/nonexistent/prior.csv", &d), IMW_ERR_IO);
}

TEST(CApi, ProbabilitiesAndEvolution) {
    Canonical c;
    double p = 0.0;
    ASSERT_EQ(imw_prob_exact(c.obs, c.sel, 0.1, &p), IMW_OK);
    EXPECT_NEAR(p, (1.0 + std::sin(0.1)) / 2.0, 1e-15);
    ASSERT_EQ(imw_prob_first_order(c.obs, c.sel, 0.1, 1e-10, &p), IMW_OK);
    EXPECT_NEAR(p, 0.55, 1e-15);

    const imw_complex psi[2] = {{kR, 0}, {kR, 0}};
    imw_complex out[2];
    ASSERT_EQ(imw_evolve(c.obs, M_PI, psi, 2, out), IMW_OK);
    EXPECT_NEAR(out[1].re, -kR, 1e-15);
    double e = 0.0;
    ASSERT_EQ(imw_expectation(c.obs, psi, 2, &e), IMW_OK);
    EXPECT_NEAR(e, 0.5, 1e-15);
    EXPECT_EQ(imw_evolve(c.obs, 0.0, psi, 3, out), IMW_ERR_DIMENSION_MISMATCH);
}

TEST(CApi, PostselectRunAndPosterior) {
    Canonical c;
    imw_distribution* prior = nullptr;
    ASSERT_EQ(imw_dist_gaussian(0.0, 0.05, 4001, 8.0, &prior), IMW_OK);
    imw_postselection_report rep{};
    imw_distribution* post = nullptr;
    ASSERT_EQ(imw_postselect_run(prior, c.obs, c.sel, nullptr, &rep, &post), IMW_OK);
    EXPECT_NEAR(rep.avg_probability, 0.5, 1e-10);
    const double want = 0.0025 * std::exp(-0.00125);
    EXPECT_LT(std::abs(rep.exact_shift - want) / want, 1e-6);
    EXPECT_NEAR(rep.validity_ratio, 0.025, 1e-12);
    EXPECT_EQ(rep.weak_ok, 1);

    imw_moments m{};
    ASSERT_EQ(imw_dist_moments(post, &m), IMW_OK);
    EXPECT_EQ(m.mean, rep.posterior_moments.mean);
    std::vector<double> nodes(imw_dist_size(post));
    EXPECT_EQ(imw_dist_copy(post, nodes.data(), nullptr, nodes.size()), IMW_OK);
    EXPECT_EQ(imw_dist_copy(post, nodes.data(), nullptr, 3), IMW_ERR_INVALID_ARGUMENT);
    imw_dist_destroy(post);
    imw_dist_destroy(prior);
}

TEST(CApi, MonteCarloDeterministic) {
    Canonical c;
    imw_distribution* prior = nullptr;
    ASSERT_EQ(imw_dist_gaussian(0.0, 0.05, 801, 8.0, &prior), IMW_OK);
    imw_mc_report a{}, b{};
    ASSERT_EQ(imw_mc_run(prior, c.obs, c.sel, 100000, 5, 1, &a), IMW_OK);
    ASSERT_EQ(imw_mc_run(prior, c.obs, c.sel, 100000, 5, 3, &b), IMW_OK);
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
    EXPECT_EQ(imw_mc_run(prior, c.obs, c.sel, 10, 5, 1, &a), IMW_ERR_INVALID_ARGUMENT);
    imw_dist_destroy(prior);
}

TEST(CApi, MeterShifts) {
    Canonical c;
    imw_meter* before = nullptr;
    imw_meter* after = nullptr;
    ASSERT_EQ(imw_meter_gaussian(1.0, 1024, 8.0, &before), IMW_OK);
    double prob = 0.0;
    ASSERT_EQ(imw_meter_postselect(before, 0.01, c.obs, c.sel, &after, &prob), IMW_OK);
    imw_meter_shift_report r{};
    ASSERT_EQ(imw_meter_compute_shifts(before, after, 0.01, imw_weak_value{0.5, 0.5}, &r), IMW_OK);
    EXPECT_LT(std::abs(r.delta_p - 0.01) / 0.01, 0.01);
    EXPECT_LT(std::abs(r.delta_q - 0.005) / 0.005, 0.01);
    imw_meter_destroy(after);
    imw_meter_destroy(before);
}

TEST(CApi, CsvRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "imweak_c_api_test.csv";
    imw_distribution* d = nullptr;
    ASSERT_EQ(imw_dist_uniform(-1.0, 2.0, 301, &d), IMW_OK);
    ASSERT_EQ(imw_dist_write_csv(d, path.c_str()), IMW_OK);
    imw_distribution* back = nullptr;
    ASSERT_EQ(imw_dist_load_csv(path.c_str(), &back), IMW_OK);
    imw_moments a{}, b{};
    imw_dist_moments(d, &a);
    imw_dist_moments(back, &b);
    EXPECT_NEAR(a.mean, b.mean, 1e-12);
    EXPECT_NEAR(a.variance, b.variance, 1e-12);
    imw_dist_destroy(back);
    imw_dist_destroy(d);
    std::filesystem::remove(path);
}

TEST(CApi, Scenarios) {
    for (int k = 0; k < 4; ++k) {
        const auto kind = static_cast<imw_scenario_kind>(k);
        imw_scenario_kind parsed{};
        ASSERT_EQ(imw_scenario_parse(imw_scenario_name(kind), &parsed), IMW_OK);
        EXPECT_EQ(parsed, kind);

        imw_scenario_params params{};
        imw_distribution* owned = nullptr;
        ASSERT_EQ(imw_scenario_defaults(kind, &params, &owned), IMW_OK);
        imw_scenario_report rep{};
        imw_distribution* coupling = nullptr;
        ASSERT_EQ(imw_scenario_run(&params, &rep, &coupling, nullptr), IMW_OK);
        double ratio = 0.0;
        imw_weak_value wv{};
        ASSERT_EQ(imw_scenario_preflight(&params, &wv, &ratio, nullptr, nullptr), IMW_OK);
        EXPECT_EQ(ratio, rep.validity_ratio);
        EXPECT_EQ(wv.im, rep.postselection.weak_value_used.im);
        EXPECT_EQ(rep.has_postselection, 1);
        EXPECT_EQ(rep.weak_ok, 1);
        EXPECT_LT(std::abs(rep.physical_shift_formula - rep.postselection.analytic_shift / rep.slope),
                  1e-12 * std::abs(rep.physical_shift_formula));
        EXPECT_NE(coupling, nullptr);
        imw_dist_destroy(coupling);
        imw_dist_destroy(owned);
    }
    imw_scenario_kind parsed{};
    EXPECT_EQ(imw_scenario_parse("nope", &parsed), IMW_ERR_INVALID_ARGUMENT);
}

TEST(CApi, DopplerWithoutMotion) {
    imw_scenario_params params{};
    imw_distribution* owned = nullptr;
    ASSERT_EQ(imw_scenario_defaults(IMW_SCENARIO_DOPPLER, &params, &owned), IMW_OK);
    params.velocity = 0.0;
    imw_scenario_report rep{};
    imw_distribution* coupling = reinterpret_cast<imw_distribution*>(&params);
    ASSERT_EQ(imw_scenario_run(&params, &rep, &coupling, nullptr), IMW_OK);
    EXPECT_EQ(rep.no_motion, 1);
    EXPECT_EQ(rep.has_postselection, 0);
    EXPECT_EQ(coupling, nullptr);
    EXPECT_STREQ(rep.unit, "s");
    imw_dist_destroy(owned);
}
