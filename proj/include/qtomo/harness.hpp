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

#pragma once

#include "qtomo/estimators.hpp"
#include "qtomo/metrics.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtomo {

enum class Estimator { Lin, Mle };

std::string_view to_string(Estimator e);

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    /// Must reduce to a pure ket.
    StateSpec target;
    /// White-noise fidelity of the true state with the target; absent means
    /// the true state is the target itself.
    std::optional<double> true_fidelity;
    /// Explicit true state; takes precedence over true_fidelity.
    std::optional<std::filesystem::path> true_file;
    std::int64_t runs = 500;
    std::int64_t copies_per_setting = 100;
    std::uint64_t master_seed = 1;
    std::vector<Estimator> estimators{Estimator::Lin, Estimator::Mle};
    double mle_tol = 1e-10;
    int mle_max_iter = 20000;
    std::filesystem::path out_dir = "out";
    double bin_width = 0.002;
    /// 0 picks the hardware concurrency.
    unsigned workers = 0;
    bool dump_counts = false;

    StateSpec true_state() const;
    /// Throws ConfigError on violated invariants.
    void validate() const;
};

/// Applies one `key = value` setting. Keys match the CLI flag names without
/// the leading dashes: target, target-seed, true-fidelity, true-file, runs,
/// copies-per-setting, seed, estimators, out-dir, bin-width, workers,
/// dump-counts, mle-tol, mle-max-iter.
void apply_setting(ScenarioConfig &cfg, std::string_view key, std::string_view value);

/// Flat `key = value` text; blank lines and '#' comments are skipped.
void parse_config(std::istream &in, ScenarioConfig &cfg);
void load_config_file(const std::filesystem::path &path, ScenarioConfig &cfg);

struct RunRecord {
    std::int64_t run = 0;
    Estimator estimator = Estimator::Lin;
    double fidelity = 0;
    double min_eig = 0;
    bool physical = false;
    // MLE only.
    int iterations = 0;
    bool converged = false;
    double log_likelihood = 0;
};

struct EstimatorSummary {
    ScenarioStats stats;
    std::int64_t unconverged_runs = 0;
};

struct ScenarioResult {
    double f0 = 0;
    /// Sorted by (run, estimator order in the config).
    std::vector<RunRecord> records;
    std::map<Estimator, EstimatorSummary> summaries;

    std::vector<double> fidelities(Estimator e) const;
    std::vector<double> min_eigs(Estimator e) const;
};

/// Simulates, estimates and scores every run. Run r draws its data from
/// RunSeed{master_seed, r}, so results do not depend on the worker count.
ScenarioResult run_scenario(const ScenarioConfig &cfg);

/// runs.csv, summary.json and histogram.csv under cfg.out_dir.
void emit_outputs(const ScenarioResult &result, const ScenarioConfig &cfg);

void write_runs_csv(std::ostream &out, const ScenarioResult &result);
void write_summary_json(std::ostream &out, const ScenarioResult &result,
                        const ScenarioConfig &cfg);

struct NamedScenario {
    std::string label;
    ScenarioConfig config;
};

/// The benchmark suite: noisy GHZ (F0 = 0.8), pure GHZ, pure W, and
/// `random_targets` Haar-random pure targets (seeds first_seed, first_seed+1,
/// ...) depolarized to F0 = 0.8. Run counts, seeds and outputs come from base;
/// each scenario writes to its own subdirectory of base.out_dir.
std::vector<NamedScenario> benchmark_scenarios(const ScenarioConfig &base, int random_targets,
                                            std::uint64_t first_seed);

/// Shortest round-trip decimal text for a double.
std::string format_double(double x);

} // namespace qtomo
