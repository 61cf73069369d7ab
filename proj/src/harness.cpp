// Copyright 2026 The qtomo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtomo/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace qtomo {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T> T parse_number(std::string_view key, std::string_view text) {
    text = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("invalid value for " + std::string(key) + ": \"" + std::string(text) +
                          "\"");
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "1" || text == "true" || text == "yes" || text == "on")
        return true;
    if (text == "0" || text == "false" || text == "no" || text == "off")
        return false;
    throw ConfigError("invalid boolean for " + std::string(key) + ": \"" + std::string(text) + "\"");
}

std::vector<Estimator> parse_estimators(std::string_view text) {
    std::vector<Estimator> out;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto name = trim(item);
        Estimator e;
        if (name == "lin")
            e = Estimator::Lin;
        else if (name == "mle")
            e = Estimator::Mle;
        else
            throw ConfigError("unknown estimator \"" + std::string(name) + "\"");
        if (std::find(out.begin(), out.end(), e) == out.end())
            out.push_back(e);
    }
    if (out.empty())
        throw ConfigError("no estimators selected");
    return out;
}

void parse_target(StateSpec &spec, std::string_view text) {
    text = trim(text);
    const std::uint64_t seed = spec.seed;
    spec = StateSpec{};
    spec.seed = seed;
    if (text == "ghz4") {
        spec.kind = StateKind::Ghz;
    } else if (text == "w4") {
        spec.kind = StateKind::W;
    } else if (text == "random-pure") {
        spec.kind = StateKind::HaarRandomPure;
    } else if (text.starts_with("file:")) {
        spec.kind = StateKind::File;
        spec.path = std::string(text.substr(5));
    } else {
        throw ConfigError("unknown target \"" + std::string(text) + "\"");
    }
}

std::string target_name(const StateSpec &spec) {
    switch (spec.kind) {
    case StateKind::Ghz:
        return "ghz4";
    case StateKind::W:
        return "w4";
    case StateKind::HaarRandomPure:
        return "random-pure";
    case StateKind::File:
        return "file:" + spec.path.string();
    }
    return "?";
}

std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

} // namespace

std::string_view to_string(Estimator e) { return e == Estimator::Lin ? "lin" : "mle"; }

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc())
        throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

StateSpec ScenarioConfig::true_state() const {
    if (true_file) {
        StateSpec spec;
        spec.kind = StateKind::File;
        spec.qubits = target.qubits;
        spec.path = *true_file;
        return spec;
    }
    StateSpec spec = target;
    spec.noise_fidelity = true_fidelity;
    return spec;
}

void ScenarioConfig::validate() const {
    if (runs < 2)
        throw ConfigError("runs must be at least 2");
    if (copies_per_setting < 1)
        throw ConfigError("copies-per-setting must be positive");
    if (estimators.empty())
        throw ConfigError("no estimators selected");
    if (!(bin_width > 0))
        throw ConfigError("bin-width must be positive");
    if (!(mle_tol > 0) || mle_max_iter < 1)
        throw ConfigError("MLE tolerance and iteration cap must be positive");
    if (target.noise_fidelity)
        throw ConfigError("the target must be a pure state");
}

void apply_setting(ScenarioConfig &cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "target")
        parse_target(cfg.target, value);
    else if (key == "target-seed")
        cfg.target.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "true-fidelity")
        cfg.true_fidelity = parse_number<double>(key, value);
    else if (key == "true-file")
        cfg.true_file = std::filesystem::path(std::string(value));
    else if (key == "runs")
        cfg.runs = parse_number<std::int64_t>(key, value);
    else if (key == "copies-per-setting")
        cfg.copies_per_setting = parse_number<std::int64_t>(key, value);
    else if (key == "seed")
        cfg.master_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "estimators")
        cfg.estimators = parse_estimators(value);
    else if (key == "out-dir")
        cfg.out_dir = std::string(value);
    else if (key == "bin-width")
        cfg.bin_width = parse_number<double>(key, value);
    else if (key == "workers")
        cfg.workers = parse_number<unsigned>(key, value);
    else if (key == "dump-counts")
        cfg.dump_counts = parse_bool(key, value);
    else if (key == "mle-tol")
        cfg.mle_tol = parse_number<double>(key, value);
    else if (key == "mle-max-iter")
        cfg.mle_max_iter = parse_number<int>(key, value);
    else
        throw ConfigError("unknown config key \"" + std::string(key) + "\"");
}

void parse_config(std::istream &in, ScenarioConfig &cfg) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(cfg, view.substr(0, eq), view.substr(eq + 1));
    }
}

void load_config_file(const std::filesystem::path &path, ScenarioConfig &cfg) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    parse_config(in, cfg);
}

std::vector<double> ScenarioResult::fidelities(Estimator e) const {
    std::vector<double> out;
    for (const auto &r : records)
        if (r.estimator == e)
            out.push_back(r.fidelity);
    return out;
}

std::vector<double> ScenarioResult::min_eigs(Estimator e) const {
    std::vector<double> out;
    for (const auto &r : records)
        if (r.estimator == e)
            out.push_back(r.min_eig);
    return out;
}

ScenarioResult run_scenario(const ScenarioConfig &cfg) {
    cfg.validate();
    const CVector psi = pure_ket(cfg.target);
    const CMatrix rho_true = make_state(cfg.true_state());
    if (rho_true.rows() != psi.size())
        throw ConfigError("target and true state dimensions differ");
    const int qubits = std::countr_zero(static_cast<unsigned>(psi.size()));
    auto pom = std::make_shared<const PauliPom>(qubits);

    ScenarioResult result;
    result.f0 = fidelity_pure(psi, rho_true);

    const auto per_run = static_cast<std::int64_t>(cfg.estimators.size());
    result.records.resize(static_cast<std::size_t>(cfg.runs * per_run));
    if (cfg.dump_counts)
        std::filesystem::create_directories(cfg.out_dir / "counts");

    MleOptions mle_opts;
    mle_opts.tol = cfg.mle_tol;
    mle_opts.max_iter = cfg.mle_max_iter;

    auto do_run = [&](std::int64_t run) {
        const CountDataset data = simulate_counts(rho_true, pom, cfg.copies_per_setting,
                                                  RunSeed{cfg.master_seed, static_cast<std::uint64_t>(run)});
        if (cfg.dump_counts) {
            char name[48];
            std::snprintf(name, sizeof name, "run_%06lld.csv", static_cast<long long>(run));
            auto out = open_output(cfg.out_dir / "counts" / name);
            write_counts_csv(out, data);
        }
        const FrequencyData freq(data);
        for (std::int64_t e = 0; e < per_run; ++e) {
            RunRecord &rec = result.records[static_cast<std::size_t>(run * per_run + e)];
            rec.run = run;
            rec.estimator = cfg.estimators[static_cast<std::size_t>(e)];
            if (rec.estimator == Estimator::Lin) {
                const LinEstimate lin = lin_estimate(freq);
                rec.fidelity = fidelity_pure(psi, lin.matrix);
                rec.min_eig = lin.min_eig;
                rec.physical = is_physical(lin.matrix);
            } else {
                const MleEstimate mle = mle_estimate(freq, mle_opts);
                rec.fidelity = fidelity_pure(psi, mle.matrix);
                rec.min_eig = min_eigenvalue(mle.matrix);
                rec.physical = is_physical(mle.matrix);
                rec.iterations = mle.iterations;
                rec.converged = mle.converged;
                rec.log_likelihood = mle.final_log_likelihood;
            }
        }
    };

    unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, cfg.runs));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::int64_t run = next.fetch_add(1);
            if (run >= cfg.runs)
                return;
            try {
                do_run(run);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = cfg.runs;
                return;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    for (Estimator e : cfg.estimators) {
        EstimatorSummary summary;
        const auto fids = result.fidelities(e);
        const auto eigs = result.min_eigs(e);
        summary.stats = aggregate(fids, result.f0, eigs);
        if (e == Estimator::Mle)
            summary.unconverged_runs = std::count_if(
                result.records.begin(), result.records.end(),
                [](const RunRecord &r) { return r.estimator == Estimator::Mle && !r.converged; });
        result.summaries[e] = summary;
    }
    return result;
}

void write_runs_csv(std::ostream &out, const ScenarioResult &result) {
    out << "run,estimator,fidelity,min_eig,iterations,converged,loglik\n";
    for (const auto &r : result.records) {
        out << r.run << ',' << to_string(r.estimator) << ',' << format_double(r.fidelity) << ','
            << format_double(r.min_eig) << ',';
        if (r.estimator == Estimator::Mle)
            out << r.iterations << ',' << (r.converged ? 1 : 0) << ','
                << format_double(r.log_likelihood);
        else
            out << ",,";
        out << '\n';
    }
}

void write_summary_json(std::ostream &out, const ScenarioResult &result,
                        const ScenarioConfig &cfg) {
    nlohmann::ordered_json config;
    config["target"] = target_name(cfg.target);
    config["target_seed"] = cfg.target.seed;
    if (cfg.true_file)
        config["true_file"] = cfg.true_file->string();
    else if (cfg.true_fidelity)
        config["true_fidelity"] = *cfg.true_fidelity;
    config["runs"] = cfg.runs;
    config["copies_per_setting"] = cfg.copies_per_setting;
    config["seed"] = cfg.master_seed;
    std::vector<std::string> names;
    for (Estimator e : cfg.estimators)
        names.emplace_back(to_string(e));
    config["estimators"] = names;
    config["mle_tol"] = cfg.mle_tol;
    config["mle_max_iter"] = cfg.mle_max_iter;
    config["bin_width"] = cfg.bin_width;

    nlohmann::ordered_json doc;
    doc["f0"] = result.f0;
    doc["config"] = config;
    for (const auto &[e, summary] : result.summaries) {
        const ScenarioStats &s = summary.stats;
        nlohmann::ordered_json j;
        j["runs"] = s.runs;
        j["mean"] = s.mean;
        j["bias_sq"] = s.bias_sq;
        j["variance"] = s.variance;
        j["mse"] = s.mse;
        j["frac_above_one"] = s.frac_above_one;
        j["frac_below_zero"] = s.frac_below_zero;
        j["frac_nonphysical_estimates"] = s.frac_nonphysical_estimates;
        j["f0"] = result.f0;
        if (e == Estimator::Mle)
            j["unconverged_runs"] = summary.unconverged_runs;
        doc["estimators"][std::string(to_string(e))] = j;
    }
    out << doc.dump(2) << '\n';
}

std::vector<NamedScenario> benchmark_scenarios(const ScenarioConfig &base, int random_targets,
                                            std::uint64_t first_seed) {
    std::vector<NamedScenario> out;
    auto add = [&](std::string label, StateKind kind, std::optional<double> f0,
                   std::uint64_t seed) {
        ScenarioConfig cfg = base;
        cfg.target = StateSpec{};
        cfg.target.kind = kind;
        cfg.target.seed = seed;
        cfg.true_fidelity = f0;
        cfg.true_file.reset();
        cfg.out_dir = base.out_dir / label;
        out.push_back({std::move(label), std::move(cfg)});
    };
    add("ghz4_f0.8", StateKind::Ghz, 0.8, 0);
    add("ghz4_f1.0", StateKind::Ghz, std::nullopt, 0);
    add("w4_f1.0", StateKind::W, std::nullopt, 0);
    for (int i = 0; i < random_targets; ++i) {
        const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
        add("random" + std::to_string(seed) + "_f0.8", StateKind::HaarRandomPure, 0.8, seed);
    }
    return out;
}

void emit_outputs(const ScenarioResult &result, const ScenarioConfig &cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    {
        auto out = open_output(cfg.out_dir / "runs.csv");
        write_runs_csv(out, result);
    }
    {
        auto out = open_output(cfg.out_dir / "summary.json");
        write_summary_json(out, result, cfg);
    }
    {
        auto out = open_output(cfg.out_dir / "histogram.csv");
        write_histogram_csv(out, result.fidelities(Estimator::Lin),
                            result.fidelities(Estimator::Mle), cfg.bin_width);
    }
}

} // namespace qtomo
