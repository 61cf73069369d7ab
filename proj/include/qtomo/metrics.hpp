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

#include "qtomo/hermitian.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace qtomo {

/// <psi|rho_hat|psi>. Linear in rho_hat and defined for unphysical
/// estimates, where it can leave [0, 1].
double fidelity_pure(const CVector &psi, const CMatrix &rho_hat);

/// (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2. Both arguments must be density
/// matrices; a negative eigenvalue beyond the clipping window throws
/// NotPositiveSemidefinite.
double fidelity_uhlmann(const CMatrix &rho1, const CMatrix &rho2);

struct Purity {
    double value = 0;
    /// False when rho_hat has a negative eigenvalue below -1e-10; the number
    /// is then not a purity.
    bool interpretable = true;
};

Purity purity(const CMatrix &rho_hat);

struct ScenarioStats {
    std::int64_t runs = 0;
    double mean = 0;
    double bias_sq = 0;
    double variance = 0;
    double mse = 0;
    double frac_above_one = 0;
    double frac_below_zero = 0;
    double frac_nonphysical_estimates = 0;
};

/// mse = mean (F - F0)^2, bias_sq = (mean F - F0)^2, variance = mse - bias_sq
/// (population convention, so the decomposition is exact). min_eigs, when
/// given, feeds frac_nonphysical_estimates (min eigenvalue below -1e-10).
ScenarioStats aggregate(std::span<const double> samples, double f0,
                        std::span<const double> min_eigs = {});

struct HistogramBin {
    double left = 0;
    std::int64_t count = 0;
};

/// Contiguous bins [m w, (m + 1) w) covering min..max of the samples.
std::vector<HistogramBin> histogram(std::span<const double> samples, double bin_width);

/// "bin_left,count_lin,count_mle" over the union of both ranges.
void write_histogram_csv(std::ostream &out, std::span<const double> lin,
                         std::span<const double> mle, double bin_width);

} // namespace qtomo
