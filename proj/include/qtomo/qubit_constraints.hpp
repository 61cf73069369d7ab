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

#include <array>
#include <cstdint>
#include <stdexcept>

namespace qtomo::qubit {

using Probabilities4 = std::array<double, 4>;

/// Four-outcome SIC measurement M_k = (1 + a_k . sigma)/4 on a regular
/// tetrahedron a_1 = (1,1,1)/sqrt3, a_2 = (1,-1,-1)/sqrt3, a_3 = (-1,1,-1)/sqrt3,
/// a_4 = (-1,-1,1)/sqrt3.
struct TetrahedronPom {
    std::array<Eigen::Vector3d, 4> axes;
    std::array<CMatrix, 4> outcomes;

    Probabilities4 probabilities(const CMatrix &rho) const;
    /// Linear inversion: Bloch vector r = 3 sum_k f_k a_k.
    CMatrix invert(const Probabilities4 &freqs) const;
};

TetrahedronPom tetrahedron_pom();

/// Unit sum within 1e-12 and sum_k p_k^2 <= 1/3 + 1e-12.
bool tetrahedron_physical(const Probabilities4 &p);

/// X/Z measurement behind a 50-50 splitter, outcomes ordered 0, 1, +, -;
/// each element carries the 1/2 splitter factor.
std::array<CMatrix, 4> bb84_pom();
Probabilities4 bb84_probabilities(const CMatrix &rho);

/// p0 + p1 = p+ + p- = 1/2 and (p0 - p1)^2 + (p+ - p-)^2 <= 1/4, within 1e-12.
bool bb84_constraints(const Probabilities4 &p);

struct Bb84Counts {
    std::uint64_t n0 = 0, n1 = 0, nplus = 0, nminus = 0;
};

struct Bb84Fixed {
    Probabilities4 frequencies{};
    std::uint64_t effective_total = 0;
};

class NegativePseudoCount : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Discards n+ in favour of n0 + n1 - n-, over N_eff = 2 (n0 + n1).
Bb84Fixed bb84_discard_fix(const Bb84Counts &c);

/// Bloch-ball qubit from a Bloch vector.
CMatrix qubit_state(const Eigen::Vector3d &bloch);

} // namespace qtomo::qubit
