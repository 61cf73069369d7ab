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

#include "qtomo/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace qtomo {

namespace {

// In-place Walsh-Hadamard transform: out[m] = sum_k (-1)^{popcount(k & m)} in[k].
void walsh_hadamard(RVector &v) {
    const Eigen::Index n = v.size();
    for (Eigen::Index h = 1; h < n; h <<= 1)
        for (Eigen::Index i = 0; i < n; i += h << 1)
            for (Eigen::Index j = i; j < i + h; ++j) {
                const double a = v(j);
                const double b = v(j + h);
                v(j) = a + b;
                v(j + h) = a - b;
            }
}

// Word index of setting t restricted to the positions in mask.
std::size_t restricted_word(const PauliWord &setting, std::uint32_t mask) {
    const int n = setting.qubits();
    std::size_t idx = 0;
    for (int q = 0; q < n; ++q) {
        const bool keep = (mask >> (n - 1 - q)) & 1u;
        idx = idx * 4 + (keep ? static_cast<std::size_t>(setting[q]) : 0);
    }
    return idx;
}

// Likelihood pieces for a fixed dataset. Outcomes with zero counts drop
// out of both the likelihood and R.
class LikelihoodModel {
  public:
    explicit LikelihoodModel(const FrequencyData &data)
        : pom_(*data.pom), counts_(data.counts), total_(data.total()) {}

    Eigen::MatrixXd probabilities(const CMatrix &rho) const {
        return pom_.probability_table(rho);
    }

    LogLikelihood log_likelihood(const Eigen::MatrixXd &probs) const {
        LogLikelihood out;
        for (Eigen::Index j = 0; j < probs.size(); ++j) {
            const double n = counts_.data()[j];
            if (n <= 0)
                continue;
            double p = probs.data()[j];
            if (p < kProbabilityFloor) {
                p = kProbabilityFloor;
                out.boundary_warning = true;
            }
            out.value += n * std::log(p);
        }
        return out;
    }

    ROperator r_operator(const Eigen::MatrixXd &probs) const {
        ROperator out;
        Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(probs.rows(), probs.cols());
        for (Eigen::Index j = 0; j < probs.size(); ++j) {
            const double n = counts_.data()[j];
            if (n <= 0)
                continue;
            double p = probs.data()[j];
            if (p < kProbabilityFloor) {
                p = kProbabilityFloor;
                out.boundary_warning = true;
            }
            weights.data()[j] = n / (total_ * p);
        }
        out.matrix = pom_.weighted_projector_sum(weights);
        out.matrix = (out.matrix + out.matrix.adjoint()) / 2.0;
        return out;
    }

    /// l(next) - l(current) summed term by term; differencing the two totals
    /// loses the small gains near the maximum to cancellation.
    double gain(const Eigen::MatrixXd &current, const Eigen::MatrixXd &change) const {
        double out = 0;
        for (Eigen::Index j = 0; j < current.size(); ++j) {
            const double n = counts_.data()[j];
            if (n <= 0)
                continue;
            const double p = std::max(current.data()[j], kProbabilityFloor);
            const double q = std::max(p + change.data()[j], kProbabilityFloor);
            out += n * std::log1p((q - p) / p);
        }
        return out;
    }

  private:
    const PauliPom &pom_;
    const Eigen::MatrixXd &counts_;
    double total_;
};

// Change of rho under rho -> M rho M / tr(M rho M) with M = 1 + eps (R - 1).
// Built from D = R - 1 directly so that tiny steps keep their relative
// precision instead of drowning in the rounding of rho itself.
CMatrix step_delta(const CMatrix &rho, const CMatrix &r, double eps) {
    CMatrix d = r;
    d.diagonal().array() -= 1.0;
    const CMatrix d_rho = d * rho;
    const CMatrix d_rho_d = d_rho * d;
    const double t = 1.0 + eps * eps * d_rho_d.trace().real() + 2 * eps * d_rho.trace().real();
    CMatrix delta = eps * (d_rho + d_rho.adjoint()) + (eps * eps) * d_rho_d;
    delta -= (t - 1.0) * rho;
    delta /= t;
    return (delta + delta.adjoint()) / 2.0;
}

void check_data(const FrequencyData &data) {
    if (!data.pom)
        throw std::invalid_argument("dataset has no POM");
    if (data.counts.rows() != data.pom->dim() || data.counts.cols() != data.pom->num_settings())
        throw std::invalid_argument("count table shape does not match the POM");
    if (!(data.copies_per_setting > 0))
        throw std::invalid_argument("copies_per_setting must be positive");
}

} // namespace

RVector pauli_expectation_estimates(const FrequencyData &data) {
    check_data(data);
    const PauliPom &pom = *data.pom;
    const int dim = pom.dim();
    const std::size_t words = static_cast<std::size_t>(dim) * dim;
    RVector sums = RVector::Zero(static_cast<Eigen::Index>(words));
    Eigen::VectorXi hits = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(words));
    for (int t = 0; t < pom.num_settings(); ++t) {
        RVector f = data.counts.col(t) / data.copies_per_setting;
        walsh_hadamard(f);
        const PauliWord &setting = pom.setting(t);
        for (int mask = 0; mask < dim; ++mask) {
            const auto s = static_cast<Eigen::Index>(
                restricted_word(setting, static_cast<std::uint32_t>(mask)));
            sums(s) += f(mask);
            hits(s) += 1;
        }
    }
    RVector e = sums.array() / hits.cast<double>().array();
    e(0) = 1.0;
    return e;
}

LinEstimate lin_estimate(const FrequencyData &data) {
    LinEstimate out;
    out.pauli_expectations = pauli_expectation_estimates(data);
    const int n = data.pom->qubits();
    const int dim = data.pom->dim();
    out.matrix = CMatrix::Zero(dim, dim);
    for (Eigen::Index s = 0; s < out.pauli_expectations.size(); ++s)
        add_pauli_word(out.matrix, PauliWord::from_index(static_cast<std::size_t>(s), n),
                       out.pauli_expectations(s) / dim);
    out.min_eig = min_eigenvalue(out.matrix);
    return out;
}

LogLikelihood log_likelihood(const CMatrix &rho, const FrequencyData &data) {
    check_data(data);
    LikelihoodModel model(data);
    return model.log_likelihood(model.probabilities(rho));
}

ROperator r_operator(const CMatrix &rho, const FrequencyData &data) {
    check_data(data);
    LikelihoodModel model(data);
    return model.r_operator(model.probabilities(rho));
}

MleEstimate mle_estimate(const FrequencyData &data, const MleOptions &opts) {
    check_data(data);
    const int dim = data.pom->dim();
    LikelihoodModel model(data);

    MleEstimate out;
    CMatrix rho = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
    Eigen::MatrixXd probs = model.probabilities(rho);
    LogLikelihood ll = model.log_likelihood(probs);

    Eigen::MatrixXd change;
    ROperator r = model.r_operator(probs);
    while (out.iterations < opts.max_iter) {
        double eps = opts.epsilon;
        CMatrix delta;
        double gain = 0;
        for (;;) {
            delta = step_delta(rho, r.matrix, eps);
            change = model.probabilities(delta);
            gain = model.gain(probs, change);
            if (gain >= 0 || eps < 1e-12)
                break;
            eps /= 2;
        }
        if (gain < 0) {
            // No step size improves the likelihood any more.
            out.converged = max_eigenvalue(r.matrix) - 1.0 <= kOptimalityTol;
            break;
        }
        rho += delta;
        probs += change;
        if (out.iterations % 256 == 255) {
            // Resync against drift from the accumulated increments.
            rho /= rho.trace().real();
            probs = model.probabilities(rho);
        }
        ll = model.log_likelihood(probs);
        r = model.r_operator(probs);
        ++out.iterations;
        if (opts.on_step)
            opts.on_step(out.iterations, ll.value);
        // A small gain far from optimal is slow progress, not arrival.
        if (gain < opts.tol && max_eigenvalue(r.matrix) - 1.0 <= kOptimalityTol) {
            out.converged = true;
            break;
        }
    }

    out.matrix = std::move(rho);
    out.final_log_likelihood = ll.value;
    out.boundary_warning = ll.boundary_warning || r.boundary_warning;
    out.optimality_gap = max_eigenvalue(r.matrix) - 1.0;
    return out;
}

} // namespace qtomo
