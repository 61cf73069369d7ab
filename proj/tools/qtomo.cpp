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

// qtomo: tomography benchmark driver.
//
//   qtomo run [--config PATH] [--target ...] [--true-fidelity F] ...
//   qtomo check-constraints FILE [--pom tetrahedron|bb84] [--discard-fix]
//   qtomo suite [--runs N] [--out-dir DIR] ...

#include "qtomo/harness.hpp"
#include "qtomo/qubit_constraints.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace qtomo;

constexpr int kExitUnphysical = 1;
constexpr int kExitFailure = 2;

// Scenario flags shared by `run` and `suite`. Values are collected as text
// and routed through apply_setting so config files and flags parse alike.
struct ScenarioFlags {
    std::vector<std::pair<std::string, std::string>> given;

    void add(CLI::App *app, const std::string &name, const std::string &help) {
        app->add_option_function<std::string>(
            "--" + name, [this, name](const std::string &v) { given.emplace_back(name, v); }, help);
    }
    void add_flag(CLI::App *app, const std::string &name, const std::string &help) {
        app->add_flag_function(
            "--" + name, [this, name](std::int64_t) { given.emplace_back(name, "true"); }, help);
    }
    void apply(ScenarioConfig &cfg) const {
        for (const auto &[k, v] : given)
            apply_setting(cfg, k, v);
    }
};

void add_common_flags(CLI::App *app, ScenarioFlags &flags) {
    flags.add(app, "runs", "Number of simulated experiments (default 500)");
    flags.add(app, "copies-per-setting", "Copies measured per Pauli setting (default 100)");
    flags.add(app, "seed", "Master seed for the run substreams");
    flags.add(app, "estimators", "Comma list from {lin, mle}");
    flags.add(app, "out-dir", "Output directory");
    flags.add(app, "bin-width", "Histogram bin width (default 0.002)");
    flags.add(app, "workers", "Worker threads (0 = hardware concurrency)");
    flags.add(app, "mle-tol", "MLE log-likelihood increase threshold");
    flags.add(app, "mle-max-iter", "MLE iteration cap");
    flags.add_flag(app, "dump-counts", "Write each run's counts to out-dir/counts/");
}

void print_summary(const std::string &label, const ScenarioResult &result) {
    std::printf("%-22s F0=%.6f", label.c_str(), result.f0);
    for (const auto &[e, s] : result.summaries) {
        std::printf("  %s: mean=%.6f mse=%.4e var=%.4e bias_sq=%.4e",
                    std::string(to_string(e)).c_str(), s.stats.mean, s.stats.mse,
                    s.stats.variance, s.stats.bias_sq);
        if (e == Estimator::Mle && s.unconverged_runs)
            std::printf(" unconverged=%lld", static_cast<long long>(s.unconverged_runs));
    }
    std::printf("\n");
}

int cmd_run(const std::string &config_path, const ScenarioFlags &flags) {
    ScenarioConfig cfg;
    if (!config_path.empty())
        load_config_file(config_path, cfg);
    flags.apply(cfg);
    const auto result = run_scenario(cfg);
    emit_outputs(result, cfg);
    print_summary("scenario", result);
    return 0;
}

int cmd_suite(const ScenarioFlags &flags, int random_targets, std::uint64_t first_seed) {
    ScenarioConfig base;
    base.out_dir = "suite";
    flags.apply(base);
    std::filesystem::create_directories(base.out_dir);
    std::ofstream table(base.out_dir / "suite.csv");
    if (!table)
        throw std::runtime_error("cannot write " + (base.out_dir / "suite.csv").string());
    table << "scenario,f0,estimator,mse,variance,bias_sq,mean,frac_above_one,frac_below_zero,"
             "frac_nonphysical_estimates\n";
    for (const auto &[label, cfg] : benchmark_scenarios(base, random_targets, first_seed)) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto result = run_scenario(cfg);
        emit_outputs(result, cfg);
        for (const auto &[e, s] : result.summaries)
            table << label << ',' << format_double(result.f0) << ',' << to_string(e) << ','
                  << format_double(s.stats.mse) << ',' << format_double(s.stats.variance) << ','
                  << format_double(s.stats.bias_sq) << ',' << format_double(s.stats.mean) << ','
                  << format_double(s.stats.frac_above_one) << ','
                  << format_double(s.stats.frac_below_zero) << ','
                  << format_double(s.stats.frac_nonphysical_estimates) << '\n';
        print_summary(label, result);
        std::printf("%22s (%.1f s)\n", "",
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return 0;
}

int cmd_check_constraints(const std::string &path, const std::string &pom, bool discard_fix) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    qubit::Probabilities4 p{};
    for (double &x : p)
        if (!(in >> x))
            throw std::runtime_error(path + ": expected four numbers");
    double extra = 0;
    if (in >> extra)
        throw std::runtime_error(path + ": expected exactly four numbers");

    bool physical = false;
    if (pom == "tetrahedron") {
        physical = qubit::tetrahedron_physical(p);
        const double sq = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
        std::printf("tetrahedron: sum=%.15g sum_sq=%.15g (bound 1/3) -> %s\n",
                    p[0] + p[1] + p[2] + p[3], sq, physical ? "physical" : "unphysical");
    } else {
        if (discard_fix) {
            qubit::Bb84Counts c;
            std::uint64_t *slots[] = {&c.n0, &c.n1, &c.nplus, &c.nminus};
            for (std::size_t k = 0; k < 4; ++k) {
                if (p[k] < 0 || p[k] != std::floor(p[k]))
                    throw std::runtime_error("--discard-fix expects nonnegative integer counts");
                *slots[k] = static_cast<std::uint64_t>(p[k]);
            }
            const auto fixed = qubit::bb84_discard_fix(c);
            p = fixed.frequencies;
            std::printf("discard fix: N_eff=%llu f=(%.15g, %.15g, %.15g, %.15g)\n",
                        static_cast<unsigned long long>(fixed.effective_total), p[0], p[1], p[2],
                        p[3]);
        }
        physical = qubit::bb84_constraints(p);
        const double q = (p[0] - p[1]) * (p[0] - p[1]) + (p[2] - p[3]) * (p[2] - p[3]);
        std::printf("bb84: p0+p1=%.15g p++p-=%.15g quadratic=%.15g (bound 1/4) -> %s\n",
                    p[0] + p[1], p[2] + p[3], q, physical ? "physical" : "unphysical");
    }
    return physical ? 0 : kExitUnphysical;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum state tomography benchmark: linear inversion vs maximum likelihood"};
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "Run one scenario and write runs.csv, summary.json, "
                                          "histogram.csv");
    std::string config_path;
    ScenarioFlags run_flags;
    run->add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
    run_flags.add(run, "target", "ghz4 | w4 | random-pure | file:PATH");
    run_flags.add(run, "target-seed", "Seed for the random-pure target");
    run_flags.add(run, "true-fidelity", "White-noise true state with this target fidelity");
    run_flags.add(run, "true-file", "Explicit true state file");
    add_common_flags(run, run_flags);

    auto *check = app.add_subcommand("check-constraints",
                                     "Check four qubit probabilities against the physicality "
                                     "constraints; exit 0 if physical, 1 if not");
    std::string check_path;
    std::string pom = "tetrahedron";
    bool discard_fix = false;
    check->add_option("file", check_path, "File with four numbers")->required();
    check->add_option("--pom", pom, "tetrahedron | bb84 (order p0 p1 p+ p-)")
        ->check(CLI::IsMember({"tetrahedron", "bb84"}));
    check->add_flag("--discard-fix", discard_fix,
                    "bb84 only: read counts n0 n1 n+ n- and apply the discard-data fix first");

    auto *suite = app.add_subcommand("suite", "Run the built-in benchmark suite");
    ScenarioFlags table_flags;
    int random_targets = 3;
    std::uint64_t first_seed = 101;
    add_common_flags(suite, table_flags);
    suite->add_option("--random-targets", random_targets, "Number of random pure targets");
    suite->add_option("--first-target-seed", first_seed, "Seed of the first random target");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return cmd_run(config_path, run_flags);
        if (*check)
            return cmd_check_constraints(check_path, pom, discard_fix);
        if (*suite)
            return cmd_suite(table_flags, random_targets, first_seed);
    } catch (const qubit::NegativePseudoCount &e) {
        std::fprintf(stderr, "qtomo: %s\n", e.what());
        return kExitUnphysical;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "qtomo: %s\n", e.what());
        return kExitFailure;
    }
    return kExitFailure;
}
