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

#include "qtomo/states.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>

namespace qtomo {

using CountTable = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Click counts for every setting of a product-Pauli POM. Column t holds the
/// 2^n outcome counts of setting t and sums to copies_per_setting.
struct CountDataset {
    std::shared_ptr<const PauliPom> pom;
    std::int64_t copies_per_setting = 0;
    CountTable counts;

    std::int64_t total() const { return copies_per_setting * pom->num_settings(); }
    /// Throws std::invalid_argument when shapes or column sums are off.
    void validate() const;
};

struct RunSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t run_index = 0;

    /// Generator seed for this run; a pure function of both fields.
    std::uint64_t substream() const noexcept;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Multinomial draw per setting via sequential conditional binomials.
CountDataset simulate_counts(const CMatrix &rho, std::shared_ptr<const PauliPom> pom,
                             std::int64_t copies_per_setting, RunSeed seed);

/// Real-valued per-setting weights, the form the estimators consume. Built
/// from observed counts, or from exact Born probabilities (noise-free
/// pseudo-data where every count equals copies * probability).
struct FrequencyData {
    std::shared_ptr<const PauliPom> pom;
    double copies_per_setting = 0;
    Eigen::MatrixXd counts;

    FrequencyData() = default;
    FrequencyData(const CountDataset &data); // NOLINT(google-explicit-constructor)

    static FrequencyData exact(const CMatrix &rho, std::shared_ptr<const PauliPom> pom,
                               double copies_per_setting);

    double total() const { return copies_per_setting * pom->num_settings(); }
    Eigen::MatrixXd frequencies() const { return counts / copies_per_setting; }
};

/// f(k, t) = n(k, t) / copies_per_setting.
Eigen::MatrixXd relative_frequencies(const CountDataset &data);

/// CSV "setting,outcome,count" with the setting word and outcome bitstring.
void write_counts_csv(std::ostream &out, const CountDataset &data);

} // namespace qtomo
