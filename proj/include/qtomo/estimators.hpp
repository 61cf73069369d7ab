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

#include "qtomo/simulate.hpp"

#include <functional>

namespace qtomo {

/// Probabilities below this are floored inside the likelihood and R operator.
inline constexpr double kProbabilityFloor = 1e-14;

/// Estimated expectation value of every Pauli word, indexed by
/// PauliWord::index(). A word measured by several settings gets the uniform
/// average of its per-setting estimates; the all-identity entry is 1.
RVector pauli_expectation_estimates(const FrequencyData &data);

struct LinEstimate {
    CMatrix matrix;
    double min_eig = 0;
    RVector pauli_expectations;
};

/// Linear inversion (1/2^n) sum_s e_s sigma_s. Unit trace and Hermitian;
/// not necessarily positive.
LinEstimate lin_estimate(const FrequencyData &data);

struct LogLikelihood {
    double value = 0;
    /// Set when a clicked outcome had probability below the floor.
    bool boundary_warning = false;
};

/// sum over clicked outcomes of n log p, multinomial constant dropped.
LogLikelihood log_likelihood(const CMatrix &rho, const FrequencyData &data);

struct ROperator {
    CMatrix matrix;
    bool boundary_warning = false;
};

/// R = (1/N) sum_{clicked} n |v><v| / p. At the likelihood maximum R <= 1
/// with R rho = rho.
ROperator r_operator(const CMatrix &rho, const FrequencyData &data);

/// Largest lambda_max(R) - 1 accepted as arrival at the maximum.
inline constexpr double kOptimalityTol = 1e-6;

struct MleOptions {
    /// Stop once an accepted step raises the log-likelihood by less than
    /// this and the optimality gap is within kOptimalityTol.
    double tol = 1e-10;
    int max_iter = 20000;
    /// Step weight of M = (1 - eps) + eps R at the start of every iteration;
    /// halved while the step would lower the likelihood.
    double epsilon = 1.0;
    /// Called with (iteration, log-likelihood) after every accepted step.
    std::function<void(int, double)> on_step;
};

struct MleEstimate {
    CMatrix matrix;
    int iterations = 0;
    double final_log_likelihood = 0;
    bool converged = false;
    /// lambda_max(R(rho)) - 1; zero at the maximizer.
    double optimality_gap = 0;
    bool boundary_warning = false;
};

/// Likelihood maximization over density matrices by the R rho R iteration,
/// with diluted steps whenever the full step would lower the likelihood.
MleEstimate mle_estimate(const FrequencyData &data, const MleOptions &opts = {});

} // namespace qtomo
