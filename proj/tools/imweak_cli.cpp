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

// imweak command-line front end. Reads a JSON run config, calls the C API and
// writes report.json, CSV dumps and manifest.json into the output directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imweak/imweak.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitDegenerate = 3,
    kExitZeroAcceptance = 4,
    kExitEngine = 5,
    kExitOutput = 6,
};

struct CliError : std::runtime_error {
    CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

int exit_code_for(imw_status s) {
    switch (s) {
    case IMW_OK:
        return kExitOk;
    case IMW_ERR_INVALID_ARGUMENT:
    case IMW_ERR_DIMENSION_MISMATCH:
    case IMW_ERR_NOT_HERMITIAN:
    case IMW_ERR_NOT_NORMALIZED:
    case IMW_ERR_IO:
        return kExitConfig;
    case IMW_ERR_DEGENERATE_SELECTION:
        return kExitDegenerate;
    case IMW_ERR_ZERO_ACCEPTANCE:
        return kExitZeroAcceptance;
    default:
        return kExitEngine;
    }
}

void check(imw_status s) {
    if (s != IMW_OK)
        throw CliError(exit_code_for(s), imw_last_error());
}

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    throw CliError(kExitConfig, "config: " + where + ": " + what);
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using Observable = std::unique_ptr<imw_observable, Deleter<imw_observable, imw_observable_destroy>>;
using Selection = std::unique_ptr<imw_selection, Deleter<imw_selection, imw_selection_destroy>>;
using Distribution = std::unique_ptr<imw_distribution, Deleter<imw_distribution, imw_dist_destroy>>;
using Meter = std::unique_ptr<imw_meter, Deleter<imw_meter, imw_meter_destroy>>;

// ---- config parsing ----

const json* find(const json& obj, const char* key) {
    if (!obj.is_object())
        return nullptr;
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& section(const json& cfg, const char* key) {
    const json* s = find(cfg, key);
    if (s == nullptr || !s->is_object())
        config_error(key, "missing object");
    return *s;
}

double number(const json& obj, const char* key, const std::string& where, std::optional<double> fallback = {}) {
    const json* v = find(obj, key);
    if (v == nullptr) {
        if (fallback)
            return *fallback;
        config_error(where + "." + key, "missing number");
    }
    if (!v->is_number())
        config_error(where + "." + key, "expected a number");
    return v->get<double>();
}

std::uint64_t count(const json& obj, const char* key, const std::string& where,
                    std::optional<std::uint64_t> fallback = {}) {
    const json* v = find(obj, key);
    if (v == nullptr) {
        if (fallback)
            return *fallback;
        config_error(where + "." + key, "missing integer");
    }
    if (!v->is_number_unsigned())
        config_error(where + "." + key, "expected a non-negative integer");
    return v->get<std::uint64_t>();
}

std::string text(const json& obj, const char* key, const std::string& where) {
    const json* v = find(obj, key);
    if (v == nullptr || !v->is_string())
        config_error(where + "." + key, "expected a string");
    return v->get<std::string>();
}

/// A number or an [re, im] pair.
imw_complex complex_value(const json& v, const std::string& where) {
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    config_error(where, "expected a number or an [re, im] pair");
}

std::vector<imw_complex> complex_vector(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty())
        config_error(where, "expected a non-empty array of amplitudes");
    std::vector<imw_complex> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(complex_value(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

/// Row-major square matrix from an array of rows.
std::vector<imw_complex> complex_matrix(const json& v, const std::string& where, std::size_t& dim) {
    if (!v.is_array() || v.empty())
        config_error(where, "expected an array of rows");
    dim = v.size();
    std::vector<imw_complex> out;
    for (std::size_t i = 0; i < dim; ++i) {
        const std::string row = where + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != dim)
            config_error(row, "expected " + std::to_string(dim) + " entries (square matrix)");
        for (std::size_t j = 0; j < dim; ++j)
            out.push_back(complex_value(v[i][j], row + "[" + std::to_string(j) + "]"));
    }
    return out;
}

Observable make_observable(const json& sys) {
    const json* m = find(sys, "observable");
    if (m == nullptr)
        config_error("system.observable", "missing matrix");
    std::size_t dim = 0;
    const std::vector<imw_complex> entries = complex_matrix(*m, "system.observable", dim);
    imw_observable* obs = nullptr;
    const imw_status s = imw_observable_create(entries.data(), dim, &obs);
    if (s == IMW_ERR_NOT_HERMITIAN) {
        double asym = 0.0;
        imw_matrix_max_asymmetry(entries.data(), dim, &asym);
        std::ostringstream os;
        os << "matrix is not Hermitian (max |m_ij - conj(m_ji)| = " << asym << ")";
        config_error("system.observable", os.str());
    }
    check(s);
    return Observable(obs);
}

Selection make_selection(const json& sys) {
    const json* pre = find(sys, "pre");
    const json* post = find(sys, "post");
    if (pre == nullptr || post == nullptr)
        config_error("system", "needs both 'pre' and 'post' state vectors");
    const auto a = complex_vector(*pre, "system.pre");
    const auto b = complex_vector(*post, "system.post");
    if (a.size() != b.size())
        config_error("system", "pre and post have different dimensions");
    imw_selection* sel = nullptr;
    check(imw_selection_create(a.data(), b.data(), a.size(), &sel));
    return Selection(sel);
}

struct System {
    Observable obs;
    Selection sel;
};

System make_system(const json& cfg) {
    const json& sys = section(cfg, "system");
    System s{make_observable(sys), make_selection(sys)};
    if (imw_observable_dim(s.obs.get()) != imw_selection_dim(s.sel.get()))
        config_error("system", "observable and states have different dimensions");
    return s;
}

/// Constructor name plus parameters, an inline table, or a CSV path relative
/// to the config file.
Distribution make_distribution(const json& d, const std::string& where, const fs::path& base) {
    if (!d.is_object())
        config_error(where, "expected an object");
    const std::string type = text(d, "type", where);
    imw_distribution* out = nullptr;
    if (type == "gaussian") {
        check(imw_dist_gaussian(number(d, "mean", where, 0.0), number(d, "sigma", where), count(d, "n", where, 4001),
                                number(d, "span", where, 8.0), &out));
    } else if (type == "exponential") {
        check(imw_dist_exponential(number(d, "rate", where), count(d, "n", where, 20001), number(d, "span", where, 30.0),
                                   &out));
    } else if (type == "uniform") {
        check(imw_dist_uniform(number(d, "a", where), number(d, "b", where), count(d, "n", where, 4001), &out));
    } else if (type == "table") {
        const json* nodes = find(d, "nodes");
        const json* values = find(d, "values");
        if (nodes == nullptr || values == nullptr || !nodes->is_array() || !values->is_array())
            config_error(where, "table needs 'nodes' and 'values' arrays");
        std::vector<double> x, f;
        try {
            x = nodes->get<std::vector<double>>();
            f = values->get<std::vector<double>>();
        } catch (const json::exception&) {
            config_error(where, "table entries must be numbers");
        }
        if (x.size() != f.size())
            config_error(where, "nodes and values differ in length");
        check(imw_dist_from_table(x.data(), f.data(), x.size(), &out));
    } else if (type == "csv") {
        fs::path path = text(d, "path", where);
        if (path.is_relative())
            path = base / path;
        if (!fs::exists(path))
            config_error(where + ".path", "file not found: " + path.string());
        check(imw_dist_load_csv(path.c_str(), &out));
    } else {
        config_error(where + ".type", "unknown distribution type '" + type + "'");
    }
    return Distribution(out);
}

imw_postselect_options postselect_options(const json& cfg) {
    imw_postselect_options o;
    imw_postselect_options_default(&o);
    if (const json* p = find(cfg, "postselect")) {
        o.overlap_tolerance = number(*p, "overlap_tolerance", "postselect", o.overlap_tolerance);
        o.validity_threshold = number(*p, "validity_threshold", "postselect", o.validity_threshold);
        if (const json* c = find(*p, "center_on_mean")) {
            if (!c->is_boolean())
                config_error("postselect.center_on_mean", "expected true or false");
            o.center_on_mean = c->get<bool>() ? 1 : 0;
        }
    }
    return o;
}

// ---- output ----

json to_json(const imw_moments& m) {
    return {{"mean", m.mean}, {"variance", m.variance}, {"std", m.std}};
}

json to_json(const imw_weak_value& w) {
    return {{"re", w.re}, {"im", w.im}};
}

json to_json(const imw_postselection_report& r) {
    return {
        {"avg_probability", r.avg_probability},
        {"prior_moments", to_json(r.prior_moments)},
        {"posterior_moments", to_json(r.posterior_moments)},
        {"exact_shift", r.exact_shift},
        {"analytic_shift", r.analytic_shift},
        {"validity_ratio", r.validity_ratio},
        {"weak_value_used", to_json(r.weak_value_used)},
        {"weak_ok", r.weak_ok != 0},
        {"validity_threshold", r.validity_threshold},
        {"prior_skewness", r.prior_skewness},
        {"mean_offset", r.mean_offset},
    };
}

/// Writes every artifact through a temporary file in the same directory and
/// renames it into place.
class OutputDir {
public:
    explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec)
            throw CliError(kExitOutput, "output: cannot create " + dir_.string() + ": " + ec.message());
    }

    void text(const std::string& name, const std::string& content) {
        commit(name, [&](const fs::path& tmp) {
            std::ofstream os(tmp, std::ios::binary);
            os << content;
            os.close();
            if (!os)
                throw CliError(kExitOutput, "output: write failed for " + tmp.string());
        });
    }

    void distribution(const std::string& name, const imw_distribution* d) {
        commit(name, [&](const fs::path& tmp) { check_output(imw_dist_write_csv(d, tmp.c_str())); });
    }

    void meter(const std::string& name, const imw_meter* m) {
        commit(name, [&](const fs::path& tmp) { check_output(imw_meter_write_csv(m, tmp.c_str())); });
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    static void check_output(imw_status s) {
        if (s != IMW_OK)
            throw CliError(kExitOutput, imw_last_error());
    }

    template <class F>
    void commit(const std::string& name, F&& write) {
        const fs::path target = dir_ / name;
        const fs::path tmp = dir_ / ("." + name + ".tmp");
        write(tmp);
        std::error_code ec;
        fs::rename(tmp, target, ec);
        if (ec) {
            fs::remove(tmp, ec);
            throw CliError(kExitOutput, "output: cannot rename into " + target.string());
        }
        written_.push_back(name);
    }

    fs::path dir_;
    std::vector<std::string> written_;
};

// ---- commands ----

struct Context {
    json config;
    fs::path base;
};

json run_weakvalue(const Context& ctx, OutputDir&) {
    const System sys = make_system(ctx.config);
    imw_weak_value wv{};
    check(imw_compute_weak_value(sys.obs.get(), sys.sel.get(), postselect_options(ctx.config).overlap_tolerance, &wv));
    imw_complex overlap{};
    check(imw_selection_overlap(sys.sel.get(), &overlap));
    return {
        {"dim", imw_observable_dim(sys.obs.get())},
        {"weak_value", to_json(wv)},
        {"overlap", {{"re", overlap.re}, {"im", overlap.im}}},
    };
}

json run_postselect(const Context& ctx, OutputDir& out) {
    const System sys = make_system(ctx.config);
    const Distribution prior = make_distribution(section(ctx.config, "distribution"), "distribution", ctx.base);
    const imw_postselect_options opt = postselect_options(ctx.config);
    imw_postselection_report rep{};
    imw_distribution* post_raw = nullptr;
    check(imw_postselect_run(prior.get(), sys.obs.get(), sys.sel.get(), &opt, &rep, &post_raw));
    const Distribution post(post_raw);
    imw_weak_value wv{};
    check(imw_compute_weak_value(sys.obs.get(), sys.sel.get(), opt.overlap_tolerance, &wv));
    out.distribution("prior.csv", prior.get());
    out.distribution("posterior.csv", post.get());
    json r = to_json(rep);
    r["weak_value"] = to_json(wv);
    return r;
}

json run_montecarlo(const Context& ctx, OutputDir& out) {
    const System sys = make_system(ctx.config);
    const Distribution prior = make_distribution(section(ctx.config, "distribution"), "distribution", ctx.base);
    const json& mc = section(ctx.config, "mc");
    const std::uint64_t n = count(mc, "n", "mc");
    const std::uint64_t seed = count(mc, "seed", "mc");
    const auto threads = static_cast<unsigned>(count(mc, "threads", "mc", 0));
    imw_mc_report rep{};
    check(imw_mc_run(prior.get(), sys.obs.get(), sys.sel.get(), n, seed, threads, &rep));
    double quad = 0.0;
    imw_distribution* post_raw = nullptr;
    double p = 0.0;
    check(imw_posterior(prior.get(), sys.obs.get(), sys.sel.get(), &post_raw, &p));
    const Distribution post(post_raw);
    imw_moments m{};
    check(imw_dist_moments(post.get(), &m));
    quad = m.mean;
    out.distribution("prior.csv", prior.get());
    out.distribution("posterior.csv", post.get());
    json dev = nullptr;
    if (rep.standard_error > 0.0)
        dev = (rep.posterior_mean_estimate - quad) / rep.standard_error;
    return {
        {"n_total", rep.n_total},
        {"n_accepted", rep.n_accepted},
        {"accept_fraction", rep.accept_fraction},
        {"posterior_mean_estimate", rep.posterior_mean_estimate},
        {"standard_error", rep.standard_error},
        {"seed", rep.seed},
        {"quadrature", {{"avg_probability", p}, {"posterior_mean", quad}, {"deviation_in_standard_errors", dev}}},
    };
}

json run_meter(const Context& ctx, OutputDir& out) {
    const System sys = make_system(ctx.config);
    const json& mc = section(ctx.config, "meter");
    const double sigma_p = number(mc, "sigma_p", "meter", 1.0);
    const std::uint64_t n = count(mc, "n", "meter", 1024);
    const double span = number(mc, "span", "meter", 8.0);
    const double k = number(mc, "k", "meter");
    imw_meter* raw = nullptr;
    check(imw_meter_gaussian(sigma_p, n, span, &raw));
    const Meter before(raw);
    double prob = 0.0;
    check(imw_meter_postselect(before.get(), k, sys.obs.get(), sys.sel.get(), &raw, &prob));
    const Meter after(raw);
    imw_weak_value wv{};
    check(imw_compute_weak_value(sys.obs.get(), sys.sel.get(), postselect_options(ctx.config).overlap_tolerance, &wv));
    imw_meter_shift_report r{};
    check(imw_meter_compute_shifts(before.get(), after.get(), k, wv, &r));
    out.meter("meter_before.csv", before.get());
    out.meter("meter_after.csv", after.get());
    return {
        {"k", k},
        {"probability", prob},
        {"weak_value", to_json(wv)},
        {"delta_p", r.delta_p},
        {"delta_p_predicted", r.delta_p_predicted},
        {"delta_q", r.delta_q},
        {"delta_q_predicted", r.delta_q_predicted},
        {"var_p", r.var_p},
    };
}

/// Scenario parameters: preset defaults overridden by the config.
struct ScenarioInputs {
    imw_scenario_params params{};
    Distribution owned;
    Distribution spectrum;
    Distribution profile;
    Observable obs;
    Selection sel;
};

ScenarioInputs make_scenario(const Context& ctx) {
    const json& sc = section(ctx.config, "scenario");
    const std::string name = text(sc, "name", "scenario");
    imw_scenario_kind kind{};
    if (imw_scenario_parse(name.c_str(), &kind) != IMW_OK)
        config_error("scenario.name", "unknown scenario '" + name + "'");
    ScenarioInputs in;
    imw_distribution* owned = nullptr;
    check(imw_scenario_defaults(kind, &in.params, &owned));
    in.owned.reset(owned);
    imw_scenario_params& p = in.params;
    p.tau = number(sc, "tau", "scenario", p.tau);
    p.omega = number(sc, "omega", "scenario", p.omega);
    p.gamma = number(sc, "gamma", "scenario", p.gamma);
    p.velocity = number(sc, "velocity", "scenario", p.velocity);
    p.wavelength = number(sc, "wavelength", "scenario", p.wavelength);
    p.epsilon = number(sc, "epsilon", "scenario", p.epsilon);
    p.exponential_nodes = count(sc, "exponential_nodes", "scenario", p.exponential_nodes);
    p.exponential_span = number(sc, "exponential_span", "scenario", p.exponential_span);
    if (const json* d = find(sc, "spectrum")) {
        in.spectrum = make_distribution(*d, "scenario.spectrum", ctx.base);
        p.spectrum = in.spectrum.get();
    }
    if (const json* d = find(sc, "temporal_profile")) {
        in.profile = make_distribution(*d, "scenario.temporal_profile", ctx.base);
        p.temporal_profile = in.profile.get();
    }
    if (const json* sys = find(ctx.config, "system")) {
        if (find(*sys, "observable") != nullptr) {
            in.obs = make_observable(*sys);
            p.observable = in.obs.get();
        }
        if (find(*sys, "pre") != nullptr || find(*sys, "post") != nullptr) {
            in.sel = make_selection(*sys);
            p.selection = in.sel.get();
        }
    }
    p.postselect = postselect_options(ctx.config);
    return in;
}

json run_scenario(const Context& ctx, OutputDir& out) {
    const ScenarioInputs in = make_scenario(ctx);
    imw_scenario_report rep{};
    imw_distribution* coupling_raw = nullptr;
    imw_distribution* post_raw = nullptr;
    check(imw_scenario_run(&in.params, &rep, &coupling_raw, &post_raw));
    const Distribution coupling(coupling_raw);
    const Distribution post(post_raw);
    if (coupling)
        out.distribution("prior.csv", coupling.get());
    if (post)
        out.distribution("posterior.csv", post.get());
    json r = {
        {"name", imw_scenario_name(rep.kind)},
        {"unit", rep.unit},
        {"slope", rep.slope},
        {"physical_shift", rep.physical_shift},
        {"physical_shift_formula", rep.physical_shift_formula},
        {"validity_ratio", rep.validity_ratio},
        {"weak_ok", rep.weak_ok != 0},
        {"no_motion", rep.no_motion != 0},
        {"postselection", nullptr},
    };
    if (rep.has_postselection)
        r["postselection"] = to_json(rep.postselection);
    return r;
}

// ---- validate ----

struct Diagnostic {
    std::string severity;
    std::string message;
};

/// Checks everything a run would need and predicts the validity ratio.
int validate(const Context& ctx, const std::string& command, bool as_json) {
    std::vector<Diagnostic> diags;
    std::optional<double> ratio;
    auto attempt = [&](auto&& body) {
        try {
            body();
        } catch (const CliError& e) {
            diags.push_back({"error", e.what()});
        } catch (const std::exception& e) {
            diags.push_back({"error", std::string("internal: ") + e.what()});
        }
    };

    const imw_postselect_options opt = postselect_options(ctx.config);
    if (command == "scenario") {
        attempt([&] {
            const ScenarioInputs in = make_scenario(ctx);
            double r = 0.0;
            int ok = 0;
            check(imw_scenario_preflight(&in.params, nullptr, &r, &ok, nullptr));
            ratio = r;
        });
    } else {
        std::optional<System> sys;
        attempt([&] { sys.emplace(make_system(ctx.config)); });
        imw_weak_value wv{};
        if (sys)
            attempt([&] { check(imw_compute_weak_value(sys->obs.get(), sys->sel.get(), opt.overlap_tolerance, &wv)); });
        if (command == "postselect" || command == "montecarlo") {
            Distribution prior;
            attempt([&] { prior = make_distribution(section(ctx.config, "distribution"), "distribution", ctx.base); });
            if (command == "montecarlo") {
                attempt([&] {
                    const json& mc = section(ctx.config, "mc");
                    if (count(mc, "n", "mc") < 1000)
                        config_error("mc.n", "needs at least 1000 samples");
                    count(mc, "seed", "mc");
                });
            }
            if (sys && prior && diags.empty()) {
                attempt([&] {
                    imw_weak_value used = wv;
                    imw_moments m{};
                    check(imw_dist_moments(prior.get(), &m));
                    if (opt.center_on_mean && m.mean != 0.0) {
                        std::vector<imw_complex> psi(imw_selection_dim(sys->sel.get()));
                        double unused = 0.0;
                        check(imw_offset_decomposition(prior.get(), sys->obs.get(), sys->sel.get(),
                                                       opt.overlap_tolerance, psi.data(), &used, &unused));
                    }
                    double r = 0.0;
                    int ok = 0;
                    check(imw_validity(used, prior.get(), opt.validity_threshold, &r, &ok));
                    ratio = r;
                });
            }
        } else if (command == "meter") {
            attempt([&] {
                const json& m = section(ctx.config, "meter");
                const double sigma_p = number(m, "sigma_p", "meter", 1.0);
                const double k = number(m, "k", "meter");
                imw_meter* raw = nullptr;
                check(imw_meter_gaussian(sigma_p, count(m, "n", "meter", 1024), number(m, "span", "meter", 8.0), &raw));
                imw_meter_destroy(raw);
                if (diags.empty())
                    ratio = std::abs(wv.im) * std::abs(k) * sigma_p;
            });
        }
    }
    if (ratio && *ratio >= opt.validity_threshold) {
        std::ostringstream os;
        os << "predicted validity ratio " << *ratio << " is not below " << opt.validity_threshold
           << "; first-order shift formulas are unreliable";
        diags.push_back({"warning", os.str()});
    }

    const bool ok = std::none_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == "error"; });
    if (as_json) {
        json j = {{"command", command}, {"ok", ok}, {"predicted_validity_ratio", nullptr}, {"diagnostics", json::array()}};
        if (ratio)
            j["predicted_validity_ratio"] = *ratio;
        for (const Diagnostic& d : diags)
            j["diagnostics"].push_back({{"severity", d.severity}, {"message", d.message}});
        std::cout << j.dump(2) << '\n';
    } else {
        for (const Diagnostic& d : diags)
            std::cout << d.severity << ": " << d.message << '\n';
        if (ok)
            std::cout << "ok\n";
        if (ratio)
            std::cout << "predicted validity ratio: " << *ratio << '\n';
    }
    return ok ? kExitOk : kExitConfig;
}

// ---- driver ----

json load_config(const fs::path& path) {
    std::ifstream is(path);
    if (!is)
        throw CliError(kExitConfig, "config: cannot open " + path.string());
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw CliError(kExitConfig, "config: " + path.string() + ": " + e.what());
    }
}

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Resolves the command: the CLI argument wins; a config "command" field
/// must agree with it.
std::string config_command(const json& cfg) {
    if (const json* c = find(cfg, "command")) {
        if (!c->is_string())
            config_error("command", "expected a string");
        return c->get<std::string>();
    }
    if (find(cfg, "scenario") != nullptr)
        return "scenario";
    if (find(cfg, "meter") != nullptr)
        return "meter";
    if (find(cfg, "mc") != nullptr)
        return "montecarlo";
    if (find(cfg, "distribution") != nullptr)
        return "postselect";
    return "weakvalue";
}

int run(const std::string& command, const fs::path& config_path, const std::string& out_dir,
        std::optional<std::uint64_t> seed, std::optional<std::uint64_t> n, bool as_json) {
    const auto started = std::chrono::system_clock::now();
    const auto t0 = std::chrono::steady_clock::now();

    Context ctx;
    std::optional<OutputDir> out;
    json manifest = {{"tool", "imweak"}, {"version", imw_version()}, {"command", command},
                     {"config_path", config_path.string()}, {"started_at", utc_timestamp(started)}};
    int code = kExitOk;
    std::string error;
    try {
        ctx.config = load_config(config_path);
        ctx.base = config_path.parent_path();
        if (command == "validate")
            return validate(ctx, config_command(ctx.config), as_json);

        if (const json* c = find(ctx.config, "command"); c != nullptr && *c != command)
            config_error("command", "config is for '" + c->dump() + "', not '" + command + "'");
        if (seed || n) {
            json& mc = ctx.config["mc"];
            if (!mc.is_object())
                mc = json::object();
            if (seed)
                mc["seed"] = *seed;
            if (n)
                mc["n"] = *n;
        }
        manifest["config"] = ctx.config;
        out.emplace(out_dir);

        json report;
        if (command == "weakvalue")
            report = run_weakvalue(ctx, *out);
        else if (command == "postselect")
            report = run_postselect(ctx, *out);
        else if (command == "montecarlo")
            report = run_montecarlo(ctx, *out);
        else if (command == "meter")
            report = run_meter(ctx, *out);
        else
            report = run_scenario(ctx, *out);
        report = json{{"command", command}, {"version", imw_version()}, {"report", std::move(report)}};
        out->text("report.json", report.dump(2) + "\n");
    } catch (const CliError& e) {
        code = e.code;
        error = e.what();
    } catch (const std::exception& e) {
        code = kExitEngine;
        error = std::string("internal: ") + e.what();
    }

    if (!error.empty())
        std::cerr << "imweak: " << error << '\n';
    if (!out && !out_dir.empty()) {
        try {
            out.emplace(out_dir);
        } catch (const CliError&) {
        }
    }
    if (out) {
        if (!manifest.contains("config"))
            manifest["config"] = ctx.config;
        manifest["status"] = code == kExitOk ? "ok" : "error";
        manifest["exit_code"] = code;
        if (!error.empty())
            manifest["error"] = error;
        manifest["artifacts"] = out->written();
        manifest["elapsed_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        try {
            out->text("manifest.json", manifest.dump(2) + "\n");
        } catch (const CliError& e) {
            std::cerr << "imweak: " << e.what() << '\n';
            if (code == kExitOk)
                code = e.code;
        }
    }
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weak values through Bayesian post-selection"};
    app.set_version_flag("--version", std::string(imw_version()));
    std::string command;
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n;
    bool as_json = false;
    app.add_option("command", command, "weakvalue | postselect | montecarlo | meter | scenario | validate")
        ->required()
        ->check(CLI::IsMember({"weakvalue", "postselect", "montecarlo", "meter", "scenario", "validate"}));
    app.add_option("--config", config, "JSON run config")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (required except for validate)");
    app.add_option("--seed", seed, "Monte Carlo seed (overrides mc.seed)");
    app.add_option("--n", n, "Monte Carlo sample count (overrides mc.n)");
    app.add_flag("--json", as_json, "validate: print diagnostics as JSON");
    try {
        app.parse(argc, argv);
        if (command != "validate" && out_dir.empty())
            throw CLI::RequiredError("--out");
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    return run(command, config, out_dir, seed, n, as_json);
}
