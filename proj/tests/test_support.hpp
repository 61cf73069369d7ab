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

// Shared test generators and reference implementations. Nothing here calls
// into the code paths it is used to check.

#pragma once

#include "qtomo/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace qtomo::testing {

inline CMatrix random_complex(int rows, int cols, std::mt19937_64 &gen) {
    std::normal_distribution<double> normal;
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const double re = normal(gen);
        const double im = normal(gen);
        m.data()[i] = cplx(re, im);
    }
    return m;
}

inline CMatrix random_hermitian(int dim, std::mt19937_64 &gen) {
    const CMatrix g = random_complex(dim, dim, gen);
    return (g + g.adjoint()) / 2.0;
}

/// G G^dagger / tr, with G dim x rank Gaussian: full rank when rank = dim.
inline CMatrix random_density(int dim, std::mt19937_64 &gen, int rank = -1) {
    const CMatrix g = random_complex(dim, rank < 0 ? dim : rank, gen);
    CMatrix rho = g * g.adjoint();
    rho = (rho + rho.adjoint()) / 2.0;
    return rho / rho.trace().real();
}

/// Ascending eigenvalues of a complex Hermitian matrix by cyclic Jacobi
/// rotations on its real 2n x 2n embedding [[A, -B], [B, A]]; every
/// eigenvalue of H appears twice there.
inline std::vector<double> jacobi_eigenvalues(const CMatrix &h) {
    const int n = static_cast<int>(h.rows());
    const int m = 2 * n;
    std::vector<double> a(static_cast<std::size_t>(m * m));
    auto at = [&](int i, int j) -> double & { return a[static_cast<std::size_t>(i * m + j)]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            at(i, j) = h(i, j).real();
            at(i + n, j + n) = h(i, j).real();
            at(i, j + n) = -h(i, j).imag();
            at(i + n, j) = h(i, j).imag();
        }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (i != j)
                    off += at(i, j) * at(i, j);
        if (off < 1e-30)
            break;
        for (int p = 0; p < m - 1; ++p)
            for (int q = p + 1; q < m; ++q) {
                if (std::abs(at(p, q)) < 1e-300)
                    continue;
                const double theta = (at(q, q) - at(p, p)) / (2 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (int k = 0; k < m; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> diag(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        diag[static_cast<std::size_t>(i)] = at(i, i);
    std::sort(diag.begin(), diag.end());
    std::vector<double> out;
    for (int i = 0; i < m; i += 2)
        out.push_back(diag[static_cast<std::size_t>(i)]);
    return out;
}

inline double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace qtomo::testing
