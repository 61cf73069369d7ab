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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtomo {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);

/// Tensor product of single-qubit Pauli operators; letter 0 acts on the most
/// significant bit of the computational basis index.
class PauliWord {
  public:
    PauliWord() = default;
    explicit PauliWord(std::vector<Pauli> letters);

    /// Parses "XZZY"; '_' and ' ' are accepted as identity slots.
    static PauliWord parse(std::string_view text);
    /// Inverse of index(): base-4 digits I=0, X=1, Y=2, Z=3, first letter most significant.
    static PauliWord from_index(std::size_t index, int qubits);

    int qubits() const noexcept { return static_cast<int>(letters_.size()); }
    Pauli operator[](int q) const { return letters_[static_cast<std::size_t>(q)]; }
    const std::vector<Pauli> &letters() const noexcept { return letters_; }

    std::size_t index() const noexcept;
    /// Bit mask (basis-index convention) of the non-identity positions.
    std::uint32_t support_mask() const noexcept;
    int identity_count() const noexcept;
    std::string str() const;

    friend bool operator==(const PauliWord &, const PauliWord &) = default;

  private:
    std::vector<Pauli> letters_;
};

CMatrix pauli_matrix(Pauli p);
CMatrix pauli_word_matrix(const PauliWord &w);

/// Adds coeff * sigma_w to m using the one-nonzero-per-row structure.
void add_pauli_word(CMatrix &m, const PauliWord &w, cplx coeff);

/// The 3^n product-Pauli settings, each with 2^n product-state outcomes.
///
/// Settings are ordered base-3 over X, Y, Z with the first letter most
/// significant. Outcome k of a setting is the bitstring of k (first qubit
/// most significant); bit 0 is the +1 eigenvalue of that qubit's Pauli.
/// Kets follow X: (|0> +- |1>)/sqrt2, Y: (|0> +- i|1>)/sqrt2, Z: |0>, |1>.
class PauliPom {
  public:
    explicit PauliPom(int qubits);

    int qubits() const noexcept { return qubits_; }
    int dim() const noexcept { return dim_; }
    int num_settings() const noexcept { return static_cast<int>(settings_.size()); }
    int num_outcomes() const noexcept { return num_settings() * dim_; }

    const PauliWord &setting(int t) const { return settings_[static_cast<std::size_t>(t)]; }
    int setting_index(const PauliWord &w) const;

    /// All outcome kets as columns; column t*dim + k is outcome k of setting t.
    const CMatrix &kets() const noexcept { return kets_; }
    auto ket(int t, int k) const { return kets_.col(t * dim_ + k); }
    CMatrix projector(int t, int k) const;

    /// Every outcome probability <v|rho|v> as a dim x settings table,
    /// contracted one qubit at a time through the product structure. Linear
    /// in rho and unclipped, so it also maps Hermitian increments.
    Eigen::MatrixXd probability_table(const CMatrix &rho) const;
    /// sum over all outcomes of weights(k, t) |v_tk><v_tk|; the adjoint of
    /// probability_table.
    CMatrix weighted_projector_sum(const Eigen::MatrixXd &weights) const;

    /// A word is compatible with a setting iff its non-I letters match it.
    bool compatible(const PauliWord &s, int t) const;
    std::vector<int> compatible_settings(const PauliWord &s) const;
    /// Outcome sign of word s on outcome k of any compatible setting.
    static int outcome_sign(const PauliWord &s, int k);

  private:
    int qubits_;
    int dim_;
    std::vector<PauliWord> settings_;
    CMatrix kets_;
    // Single-qubit map from the 2x2 entry pair (i, j) to the 6 (basis, bit)
    // outcomes: local_(2b + o, 2i + j) = conj(u_bo[i]) u_bo[j].
    Eigen::Matrix<cplx, 6, 4> local_;
    std::vector<std::size_t> pair_slot_;
    std::vector<std::size_t> outcome_slot_;
};

PauliPom build_product_pauli_pom(int qubits);

enum class StateKind { Ghz, W, HaarRandomPure, File };

struct StateSpec {
    StateKind kind = StateKind::Ghz;
    int qubits = 4;
    /// Target fidelity after white-noise mixing; absent means the pure state.
    std::optional<double> noise_fidelity;
    std::uint64_t seed = 0;
    std::filesystem::path path;
};

class InfeasibleState : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

CVector ghz_ket(int qubits);
CVector w_ket(int qubits);
/// Normalized vector of i.i.d. standard complex Gaussians; bit-reproducible per seed.
CVector haar_random_ket(int dim, std::uint64_t seed);

/// Mixing weight lambda for lambda|psi><psi| + (1-lambda) I/d to have
/// fidelity f0 with |psi>.
double white_noise_weight(double f0, int dim);
CMatrix depolarize(const CVector &psi, double f0);

/// Ket of a pure spec. File specs must hold a rank-one projector.
CVector pure_ket(const StateSpec &spec);
CMatrix make_state(const StateSpec &spec);

/// Conditional outcome probabilities of setting t, tiny negatives clipped.
RVector born_probabilities(const CMatrix &rho, const PauliPom &pom, int t);
/// All outcome probabilities as a dim x settings array, same clipping.
Eigen::MatrixXd born_probability_table(const CMatrix &rho, const PauliPom &pom);

/// "dim" line then dim^2 lines "row col real imag". Validated as physical.
CMatrix read_state_file(const std::filesystem::path &path);
void write_state_file(const std::filesystem::path &path, const CMatrix &rho);

} // namespace qtomo
