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

#include "qtomo/qubit_constraints.hpp"

#include "qtomo/states.hpp"

#include <cmath>
#include <string>

namespace qtomo::qubit {

namespace {

constexpr double kTol = 1e-12;

CMatrix bloch_operator(const Eigen::Vector3d &a) {
    return a.x() * pauli_matrix(Pauli::X) + a.y() * pauli_matrix(Pauli::Y) +
           a.z() * pauli_matrix(Pauli::Z);
}

double sum(const Probabilities4 &p) { return p[0] + p[1] + p[2] + p[3]; }

} // namespace

CMatrix qubit_state(const Eigen::Vector3d &bloch) {
    return (CMatrix::Identity(2, 2) + bloch_operator(bloch)) / 2.0;
}

TetrahedronPom tetrahedron_pom() {
    TetrahedronPom pom;
    const double s = 1.0 / std::sqrt(3.0);
    pom.axes = {Eigen::Vector3d(s, s, s), Eigen::Vector3d(s, -s, -s),
                Eigen::Vector3d(-s, s, -s), Eigen::Vector3d(-s, -s, s)};
    for (std::size_t k = 0; k < 4; ++k)
        pom.outcomes[k] = (CMatrix::Identity(2, 2) + bloch_operator(pom.axes[k])) / 4.0;
    return pom;
}

Probabilities4 TetrahedronPom::probabilities(const CMatrix &rho) const {
    Probabilities4 p{};
    for (std::size_t k = 0; k < 4; ++k)
        p[k] = trace_product(rho, outcomes[k]).real();
    return p;
}

CMatrix TetrahedronPom::invert(const Probabilities4 &freqs) const {
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < 4; ++k)
        r += 3.0 * freqs[k] * axes[k];
    return qubit_state(r);
}

bool tetrahedron_physical(const Probabilities4 &p) {
    const double sq = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
    return std::abs(sum(p) - 1.0) <= kTol && sq <= 1.0 / 3.0 + kTol;
}

std::array<CMatrix, 4> bb84_pom() {
    const CMatrix id = CMatrix::Identity(2, 2);
    const CMatrix z = pauli_matrix(Pauli::Z);
    const CMatrix x = pauli_matrix(Pauli::X);
    return {(id + z) / 4.0, (id - z) / 4.0, (id + x) / 4.0, (id - x) / 4.0};
}

Probabilities4 bb84_probabilities(const CMatrix &rho) {
    const auto pom = bb84_pom();
    Probabilities4 p{};
    for (std::size_t k = 0; k < 4; ++k)
        p[k] = trace_product(rho, pom[k]).real();
    return p;
}

bool bb84_constraints(const Probabilities4 &p) {
    const double dz = p[0] - p[1];
    const double dx = p[2] - p[3];
    return std::abs(p[0] + p[1] - 0.5) <= kTol && std::abs(p[2] + p[3] - 0.5) <= kTol &&
           dz * dz + dx * dx <= 0.25 + kTol;
}

Bb84Fixed bb84_discard_fix(const Bb84Counts &c) {
    const std::uint64_t z_total = c.n0 + c.n1;
    if (z_total < c.nminus)
        throw NegativePseudoCount("discard fix needs n0 + n1 >= n-, got n0 + n1 = " +
                                  std::to_string(z_total) +
                                  ", n- = " + std::to_string(c.nminus));
    if (z_total == 0)
        throw NegativePseudoCount("discard fix needs at least one Z-arm count");
    Bb84Fixed out;
    out.effective_total = 2 * z_total;
    const std::uint64_t nplus = z_total - c.nminus;
    const auto total = static_cast<double>(out.effective_total);
    out.frequencies = {static_cast<double>(c.n0) / total, static_cast<double>(c.n1) / total,
                       static_cast<double>(nplus) / total,
                       static_cast<double>(c.nminus) / total};
    return out;
}

} // namespace qtomo::qubit
