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

#include "qtomo/states.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace qtomo {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

int bit_shift(int qubits, int q) { return qubits - 1 - q; }

// Eigenket of a single-qubit Pauli for outcome bit b (0 -> +1 eigenvalue).
std::array<cplx, 2> eigenket(Pauli p, int b) {
    switch (p) {
    case Pauli::X:
        return {cplx(kInvSqrt2, 0), cplx(b == 0 ? kInvSqrt2 : -kInvSqrt2, 0)};
    case Pauli::Y:
        return {cplx(kInvSqrt2, 0), cplx(0, b == 0 ? kInvSqrt2 : -kInvSqrt2)};
    case Pauli::Z:
        return b == 0 ? std::array<cplx, 2>{cplx(1, 0), cplx(0, 0)}
                      : std::array<cplx, 2>{cplx(0, 0), cplx(1, 0)};
    case Pauli::I:
        break;
    }
    throw std::invalid_argument("identity has no measurement eigenbasis");
}

void check_qubits(int qubits) {
    if (qubits < 1 || qubits > 5)
        throw std::invalid_argument("qubit count must be in [1, 5], got " +
                                    std::to_string(qubits));
}

} // namespace

char to_char(Pauli p) {
    constexpr char names[] = {'I', 'X', 'Y', 'Z'};
    return names[static_cast<int>(p)];
}

PauliWord::PauliWord(std::vector<Pauli> letters) : letters_(std::move(letters)) {}

PauliWord PauliWord::parse(std::string_view text) {
    std::vector<Pauli> letters;
    letters.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case 'I':
        case '_':
        case ' ':
            letters.push_back(Pauli::I);
            break;
        case 'X':
            letters.push_back(Pauli::X);
            break;
        case 'Y':
            letters.push_back(Pauli::Y);
            break;
        case 'Z':
            letters.push_back(Pauli::Z);
            break;
        default:
            throw std::invalid_argument("invalid Pauli letter '" + std::string(1, c) +
                                        "' in \"" + std::string(text) + "\"");
        }
    }
    return PauliWord(std::move(letters));
}

PauliWord PauliWord::from_index(std::size_t index, int qubits) {
    std::vector<Pauli> letters(static_cast<std::size_t>(qubits));
    for (int q = qubits - 1; q >= 0; --q) {
        letters[static_cast<std::size_t>(q)] = static_cast<Pauli>(index % 4);
        index /= 4;
    }
    return PauliWord(std::move(letters));
}

std::size_t PauliWord::index() const noexcept {
    std::size_t idx = 0;
    for (Pauli p : letters_)
        idx = idx * 4 + static_cast<std::size_t>(p);
    return idx;
}

std::uint32_t PauliWord::support_mask() const noexcept {
    std::uint32_t mask = 0;
    const int n = qubits();
    for (int q = 0; q < n; ++q)
        if (letters_[static_cast<std::size_t>(q)] != Pauli::I)
            mask |= 1u << bit_shift(n, q);
    return mask;
}

int PauliWord::identity_count() const noexcept {
    return static_cast<int>(std::count(letters_.begin(), letters_.end(), Pauli::I));
}

std::string PauliWord::str() const {
    std::string s;
    for (Pauli p : letters_)
        s.push_back(to_char(p));
    return s;
}

CMatrix pauli_matrix(Pauli p) {
    CMatrix m(2, 2);
    switch (p) {
    case Pauli::I:
        m << 1, 0, 0, 1;
        break;
    case Pauli::X:
        m << 0, 1, 1, 0;
        break;
    case Pauli::Y:
        m << 0, cplx(0, -1), cplx(0, 1), 0;
        break;
    case Pauli::Z:
        m << 1, 0, 0, -1;
        break;
    }
    return m;
}

CMatrix pauli_word_matrix(const PauliWord &w) {
    CMatrix m = CMatrix::Zero(1 << w.qubits(), 1 << w.qubits());
    add_pauli_word(m, w, 1.0);
    return m;
}

void add_pauli_word(CMatrix &m, const PauliWord &w, cplx coeff) {
    const int n = w.qubits();
    const int dim = 1 << n;
    if (m.rows() != dim || m.cols() != dim)
        throw DimensionMismatch("add_pauli_word: matrix size does not match word");
    std::uint32_t flip = 0;
    for (int q = 0; q < n; ++q)
        if (w[q] == Pauli::X || w[q] == Pauli::Y)
            flip |= 1u << bit_shift(n, q);
    for (int col = 0; col < dim; ++col) {
        cplx phase = coeff;
        for (int q = 0; q < n; ++q) {
            const int b = (col >> bit_shift(n, q)) & 1;
            switch (w[q]) {
            case Pauli::Y:
                phase *= b == 0 ? cplx(0, 1) : cplx(0, -1);
                break;
            case Pauli::Z:
                if (b)
                    phase = -phase;
                break;
            default:
                break;
            }
        }
        m(static_cast<int>(static_cast<std::uint32_t>(col) ^ flip), col) += phase;
    }
}

namespace {

// Contracts mode `mode` of a row-major tensor with the given extents against
// op (out_extent x in_extent). Complex products are spelled out in real
// arithmetic; this is the hot loop of the likelihood iteration.
template <typename Op>
void mode_product(const std::vector<cplx> &in, std::vector<cplx> &out, std::vector<int> &extents,
                  int mode, const Op &op) {
    std::size_t left = 1;
    std::size_t right = 1;
    for (int m = 0; m < mode; ++m)
        left *= static_cast<std::size_t>(extents[static_cast<std::size_t>(m)]);
    for (std::size_t m = static_cast<std::size_t>(mode) + 1; m < extents.size(); ++m)
        right *= static_cast<std::size_t>(extents[m]);
    const auto a = static_cast<std::size_t>(op.cols());
    const auto b = static_cast<std::size_t>(op.rows());
    out.assign(left * b * right, cplx(0, 0));
    for (std::size_t l = 0; l < left; ++l)
        for (std::size_t ob = 0; ob < b; ++ob) {
            double *dst = reinterpret_cast<double *>(out.data() + (l * b + ob) * right);
            for (std::size_t ia = 0; ia < a; ++ia) {
                const cplx c = op(static_cast<Eigen::Index>(ob), static_cast<Eigen::Index>(ia));
                const double cr = c.real();
                const double ci = c.imag();
                if (cr == 0 && ci == 0)
                    continue;
                const double *src =
                    reinterpret_cast<const double *>(in.data() + (l * a + ia) * right);
                for (std::size_t r = 0; r < 2 * right; r += 2) {
                    dst[r] += cr * src[r] - ci * src[r + 1];
                    dst[r + 1] += cr * src[r + 1] + ci * src[r];
                }
            }
        }
    extents[static_cast<std::size_t>(mode)] = static_cast<int>(b);
}

} // namespace

PauliPom::PauliPom(int qubits) : qubits_(qubits), dim_(1 << qubits) {
    check_qubits(qubits);
    for (int b = 0; b < 3; ++b)
        for (int o = 0; o < 2; ++o) {
            const auto u = eigenket(static_cast<Pauli>(b + 1), o);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    local_(2 * b + o, 2 * i + j) = std::conj(u[static_cast<std::size_t>(i)]) *
                                                   u[static_cast<std::size_t>(j)];
        }
    // Pair tensor slot of each (column-major) matrix entry: mode q indexes
    // 2 i_q + j_q.
    pair_slot_.resize(static_cast<std::size_t>(dim_) * dim_);
    for (int j = 0; j < dim_; ++j)
        for (int i = 0; i < dim_; ++i) {
            std::size_t idx = 0;
            for (int q = 0; q < qubits; ++q) {
                const int s = bit_shift(qubits, q);
                idx = idx * 4 + static_cast<std::size_t>(2 * ((i >> s) & 1) + ((j >> s) & 1));
            }
            pair_slot_[static_cast<std::size_t>(j) * dim_ + i] = idx;
        }
    int count = 1;
    for (int q = 0; q < qubits; ++q)
        count *= 3;
    settings_.reserve(static_cast<std::size_t>(count));
    // Outcome tensor (mode q indexes 2 b_q + o_q) to column-major (k, t).
    outcome_slot_.resize(static_cast<std::size_t>(count) * dim_);
    for (std::size_t idx = 0; idx < outcome_slot_.size(); ++idx) {
        std::size_t rest = idx;
        int t = 0, k = 0, scale3 = 1;
        for (int q = qubits - 1; q >= 0; --q) {
            const int digit = static_cast<int>(rest % 6);
            rest /= 6;
            t += (digit / 2) * scale3;
            k |= (digit % 2) << bit_shift(qubits, q);
            scale3 *= 3;
        }
        outcome_slot_[idx] = static_cast<std::size_t>(t) * dim_ + static_cast<std::size_t>(k);
    }
    kets_.resize(dim_, static_cast<Eigen::Index>(count) * dim_);
    for (int t = 0; t < count; ++t) {
        std::vector<Pauli> letters(static_cast<std::size_t>(qubits));
        int rest = t;
        for (int q = qubits - 1; q >= 0; --q) {
            letters[static_cast<std::size_t>(q)] = static_cast<Pauli>(1 + rest % 3);
            rest /= 3;
        }
        settings_.emplace_back(std::move(letters));
        const PauliWord &word = settings_.back();
        for (int k = 0; k < dim_; ++k) {
            // Product ket: amplitude on basis j is the product of per-qubit amplitudes.
            for (int j = 0; j < dim_; ++j) {
                cplx amp = 1;
                for (int q = 0; q < qubits; ++q) {
                    const int s = bit_shift(qubits, q);
                    amp *= eigenket(word[q], (k >> s) & 1)[static_cast<std::size_t>((j >> s) & 1)];
                }
                kets_(j, t * dim_ + k) = amp;
            }
        }
    }
}

int PauliPom::setting_index(const PauliWord &w) const {
    if (w.qubits() != qubits_)
        throw std::invalid_argument("setting word has wrong length: " + w.str());
    int t = 0;
    for (Pauli p : w.letters()) {
        if (p == Pauli::I)
            throw std::invalid_argument("setting word contains identity: " + w.str());
        t = t * 3 + (static_cast<int>(p) - 1);
    }
    return t;
}

CMatrix PauliPom::projector(int t, int k) const {
    const auto v = ket(t, k);
    return v * v.adjoint();
}

Eigen::MatrixXd PauliPom::probability_table(const CMatrix &rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_)
        throw DimensionMismatch("probability_table: state dimension does not match POM");
    std::vector<cplx> a(rho.size());
    std::vector<cplx> b;
    for (Eigen::Index e = 0; e < rho.size(); ++e)
        a[pair_slot_[static_cast<std::size_t>(e)]] = rho.data()[e];
    std::vector<int> extents(static_cast<std::size_t>(qubits_), 4);
    for (int q = 0; q < qubits_; ++q) {
        mode_product(a, b, extents, q, local_);
        a.swap(b);
    }
    Eigen::MatrixXd table(dim_, num_settings());
    for (std::size_t idx = 0; idx < a.size(); ++idx)
        table.data()[outcome_slot_[idx]] = a[idx].real();
    return table;
}

CMatrix PauliPom::weighted_projector_sum(const Eigen::MatrixXd &weights) const {
    if (weights.rows() != dim_ || weights.cols() != num_settings())
        throw DimensionMismatch("weighted_projector_sum: weight table shape mismatch");
    std::vector<cplx> a(outcome_slot_.size());
    std::vector<cplx> b;
    for (std::size_t idx = 0; idx < a.size(); ++idx)
        a[idx] = weights.data()[outcome_slot_[idx]];
    // <i|v><v|j> = u[i] conj(u[j]) = conj(local_(bo, 2i + j)).
    const Eigen::Matrix<cplx, 4, 6> adjoint_local = local_.conjugate().transpose();
    std::vector<int> extents(static_cast<std::size_t>(qubits_), 6);
    for (int q = 0; q < qubits_; ++q) {
        mode_product(a, b, extents, q, adjoint_local);
        a.swap(b);
    }
    CMatrix out(dim_, dim_);
    for (Eigen::Index e = 0; e < out.size(); ++e)
        out.data()[e] = a[pair_slot_[static_cast<std::size_t>(e)]];
    return out;
}

bool PauliPom::compatible(const PauliWord &s, int t) const {
    const PauliWord &setting = settings_[static_cast<std::size_t>(t)];
    for (int q = 0; q < qubits_; ++q)
        if (s[q] != Pauli::I && s[q] != setting[q])
            return false;
    return true;
}

std::vector<int> PauliPom::compatible_settings(const PauliWord &s) const {
    std::vector<int> out;
    for (int t = 0; t < num_settings(); ++t)
        if (compatible(s, t))
            out.push_back(t);
    return out;
}

int PauliPom::outcome_sign(const PauliWord &s, int k) {
    return (std::popcount(s.support_mask() & static_cast<std::uint32_t>(k)) & 1) ? -1 : 1;
}

PauliPom build_product_pauli_pom(int qubits) { return PauliPom(qubits); }

CVector ghz_ket(int qubits) {
    check_qubits(qubits);
    CVector psi = CVector::Zero(1 << qubits);
    psi(0) = kInvSqrt2;
    psi((1 << qubits) - 1) = kInvSqrt2;
    return psi;
}

CVector w_ket(int qubits) {
    check_qubits(qubits);
    CVector psi = CVector::Zero(1 << qubits);
    const double amp = 1.0 / std::sqrt(static_cast<double>(qubits));
    for (int q = 0; q < qubits; ++q)
        psi(1 << q) = amp;
    return psi;
}

CVector haar_random_ket(int dim, std::uint64_t seed) {
    if (dim < 1)
        throw std::invalid_argument("haar_random_ket: dim must be positive");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector psi(dim);
    for (int i = 0; i < dim; ++i) {
        const double re = normal(gen);
        const double im = normal(gen);
        psi(i) = cplx(re, im);
    }
    return psi / psi.norm();
}

double white_noise_weight(double f0, int dim) {
    const double floor = 1.0 / dim;
    if (!(f0 <= 1.0) || f0 < floor - 1e-15)
        throw InfeasibleState("white-noise fidelity " + std::to_string(f0) +
                              " outside [1/d, 1] for d = " + std::to_string(dim));
    return std::max(0.0, (f0 - floor) / (1.0 - floor));
}

CMatrix depolarize(const CVector &psi, double f0) {
    const int dim = static_cast<int>(psi.size());
    const double lambda = white_noise_weight(f0, dim);
    CMatrix rho = lambda * (psi * psi.adjoint());
    rho.diagonal().array() += (1.0 - lambda) / dim;
    return rho;
}

CVector pure_ket(const StateSpec &spec) {
    switch (spec.kind) {
    case StateKind::Ghz:
        return ghz_ket(spec.qubits);
    case StateKind::W:
        return w_ket(spec.qubits);
    case StateKind::HaarRandomPure:
        check_qubits(spec.qubits);
        return haar_random_ket(1 << spec.qubits, spec.seed);
    case StateKind::File: {
        const CMatrix rho = read_state_file(spec.path);
        const auto es = eig_hermitian(rho);
        const double top = es.eigenvalues(es.eigenvalues.size() - 1);
        if (std::abs(top - 1.0) > 1e-9)
            throw InfeasibleState("state file " + spec.path.string() +
                                  " is not a pure projector (largest eigenvalue " +
                                  std::to_string(top) + ")");
        return es.eigenvectors.col(es.eigenvectors.cols() - 1);
    }
    }
    throw std::logic_error("unknown state kind");
}

CMatrix make_state(const StateSpec &spec) {
    if (spec.kind == StateKind::File) {
        if (spec.noise_fidelity)
            throw InfeasibleState("white-noise mixing does not apply to file states");
        return read_state_file(spec.path);
    }
    const CVector psi = pure_ket(spec);
    if (spec.noise_fidelity)
        return depolarize(psi, *spec.noise_fidelity);
    return psi * psi.adjoint();
}

RVector born_probabilities(const CMatrix &rho, const PauliPom &pom, int t) {
    const int dim = pom.dim();
    const auto block = pom.kets().middleCols(static_cast<Eigen::Index>(t) * dim, dim);
    const CMatrix rv = rho * block;
    RVector p = block.cwiseProduct(rv.conjugate()).colwise().sum().real().transpose();
    for (auto &x : p)
        if (x < 0 && x > -1e-12)
            x = 0;
    return p;
}

Eigen::MatrixXd born_probability_table(const CMatrix &rho, const PauliPom &pom) {
    Eigen::MatrixXd table = pom.probability_table(rho);
    for (Eigen::Index j = 0; j < table.size(); ++j) {
        double &p = table.data()[j];
        if (p < 0 && p > -1e-12)
            p = 0;
    }
    return table;
}

CMatrix read_state_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open state file " + path.string());
    int dim = 0;
    if (!(in >> dim) || dim < 1)
        throw std::runtime_error("state file " + path.string() + ": bad dimension line");
    CMatrix rho = CMatrix::Zero(dim, dim);
    std::vector<bool> seen(static_cast<std::size_t>(dim) * dim, false);
    for (int line = 0; line < dim * dim; ++line) {
        int r = 0, c = 0;
        double re = 0, im = 0;
        if (!(in >> r >> c >> re >> im))
            throw std::runtime_error("state file " + path.string() + ": expected " +
                                     std::to_string(dim * dim) + " entries");
        if (r < 0 || r >= dim || c < 0 || c >= dim)
            throw std::runtime_error("state file " + path.string() + ": index out of range");
        const auto slot = static_cast<std::size_t>(r) * dim + c;
        if (seen[slot])
            throw std::runtime_error("state file " + path.string() + ": duplicate entry");
        seen[slot] = true;
        rho(r, c) = cplx(re, im);
    }
    if (!is_physical(rho))
        throw InfeasibleState("state file " + path.string() + " is not a physical state");
    return rho;
}

void write_state_file(const std::filesystem::path &path, const CMatrix &rho) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write state file " + path.string());
    out << rho.rows() << '\n' << std::setprecision(17);
    for (Eigen::Index r = 0; r < rho.rows(); ++r)
        for (Eigen::Index c = 0; c < rho.cols(); ++c)
            out << r << ' ' << c << ' ' << rho(r, c).real() << ' ' << rho(r, c).imag() << '\n';
}

} // namespace qtomo
