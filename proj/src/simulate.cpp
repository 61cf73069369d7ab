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

#include "qtomo/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

namespace qtomo {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t RunSeed::substream() const noexcept {
    return splitmix64(splitmix64(master_seed) ^ (run_index * 0xd1b54a32d192ed03ULL));
}

void CountDataset::validate() const {
    if (!pom)
        throw std::invalid_argument("dataset has no POM");
    if (copies_per_setting < 1)
        throw std::invalid_argument("copies_per_setting must be positive");
    if (counts.rows() != pom->dim() || counts.cols() != pom->num_settings())
        throw std::invalid_argument("count table shape does not match the POM");
    if ((counts.array() < 0).any())
        throw std::invalid_argument("negative count in dataset");
    for (Eigen::Index t = 0; t < counts.cols(); ++t)
        if (counts.col(t).sum() != copies_per_setting)
            throw std::invalid_argument("setting " + pom->setting(static_cast<int>(t)).str() +
                                        " counts do not sum to copies_per_setting");
}

CountDataset simulate_counts(const CMatrix &rho, std::shared_ptr<const PauliPom> pom,
                             std::int64_t copies_per_setting, RunSeed seed) {
    if (copies_per_setting < 1)
        throw std::invalid_argument("copies_per_setting must be positive");
    if (rho.rows() != pom->dim() || !is_physical(rho))
        throw InfeasibleState("simulate_counts needs a physical state of matching dimension");

    const Eigen::MatrixXd probs = born_probability_table(rho, *pom);
    std::mt19937_64 gen(seed.substream());
    CountDataset data{pom, copies_per_setting, CountTable::Zero(pom->dim(), pom->num_settings())};
    for (Eigen::Index t = 0; t < probs.cols(); ++t) {
        std::int64_t remaining = copies_per_setting;
        double mass = probs.col(t).sum();
        for (Eigen::Index k = 0; k < probs.rows() && remaining > 0; ++k) {
            if (k + 1 == probs.rows()) {
                data.counts(k, t) = remaining;
                break;
            }
            const double p = probs(k, t);
            const double cond = mass > 0 ? std::clamp(p / mass, 0.0, 1.0) : 0.0;
            std::binomial_distribution<std::int64_t> draw(remaining, cond);
            const std::int64_t n = draw(gen);
            data.counts(k, t) = n;
            remaining -= n;
            mass -= p;
        }
    }
    return data;
}

FrequencyData::FrequencyData(const CountDataset &data)
    : pom(data.pom), copies_per_setting(static_cast<double>(data.copies_per_setting)),
      counts(data.counts.cast<double>()) {
    data.validate();
}

FrequencyData FrequencyData::exact(const CMatrix &rho, std::shared_ptr<const PauliPom> pom,
                                   double copies_per_setting) {
    FrequencyData out;
    out.counts = born_probability_table(rho, *pom) * copies_per_setting;
    out.pom = std::move(pom);
    out.copies_per_setting = copies_per_setting;
    return out;
}

Eigen::MatrixXd relative_frequencies(const CountDataset &data) {
    return data.counts.cast<double>() / static_cast<double>(data.copies_per_setting);
}

void write_counts_csv(std::ostream &out, const CountDataset &data) {
    const int n = data.pom->qubits();
    out << "setting,outcome,count\n";
    for (Eigen::Index t = 0; t < data.counts.cols(); ++t) {
        const std::string word = data.pom->setting(static_cast<int>(t)).str();
        for (Eigen::Index k = 0; k < data.counts.rows(); ++k) {
            std::string bits(static_cast<std::size_t>(n), '0');
            for (int q = 0; q < n; ++q)
                if ((k >> (n - 1 - q)) & 1)
                    bits[static_cast<std::size_t>(q)] = '1';
            out << word << ',' << bits << ',' << data.counts(k, t) << '\n';
        }
    }
}

} // namespace qtomo
