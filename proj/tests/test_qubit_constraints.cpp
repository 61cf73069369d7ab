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

#include <doctest.h>

#include <random>

using namespace qtomo;
using namespace qtomo::qubit;

namespace {

double sum_sq(const Probabilities4 &p) {
    return p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
}

Eigen::Vector3d random_bloch(std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> u(-1, 1);
    for (;;) {
        Eigen::Vector3d r(u(gen), u(gen), u(gen));
        if (r.squaredNorm() <= 1)
            return r;
    }
}

} // namespace

TEST_CASE("tetrahedron POM") {
    const auto pom = tetrahedron_pom();
    CMatrix total = CMatrix::Zero(2, 2);
    for (std::size_t k = 0; k < 4; ++k) {
        total += pom.outcomes[k];
        CHECK(pom.outcomes[k].trace().real() == doctest::Approx(0.5));
        CHECK(min_eigenvalue(pom.outcomes[k]) >= -1e-15);
        CHECK(pom.axes[k].norm() == doctest::Approx(1.0));
        for (std::size_t j = 0; j < 4; ++j)
            if (j != k) {
                CHECK(pom.axes[j].dot(pom.axes[k]) == doctest::Approx(-1.0 / 3));
                // (1/16)(2 + 2 a_j.a_k) with a_j.a_k = -1/3
                CHECK(trace_product(pom.outcomes[j], pom.outcomes[k]).real() ==
                      doctest::Approx(1.0 / 12));
            }
    }
    CHECK((total - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

    const auto p = pom.probabilities(CMatrix::Identity(2, 2) / 2.0);
    for (double x : p)
        CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("tetrahedron_physical examples") {
    CHECK(tetrahedron_physical({0.25, 0.25, 0.25, 0.25}));
    CHECK(sum_sq({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(0.25));
    CHECK(!tetrahedron_physical({1, 0, 0, 0}));
    CHECK(!tetrahedron_physical({0.3, 0.3, 0.3, 0.3}));

    const auto pom = tetrahedron_pom();
    const auto p = pom.probabilities(qubit_state(pom.axes[0]));
    CHECK(p[0] == doctest::Approx(0.5));
    for (std::size_t k = 1; k < 4; ++k)
        CHECK(p[k] == doctest::Approx(1.0 / 6));
    CHECK(std::abs(sum_sq(p) - 1.0 / 3) <= 1e-12);
    CHECK(tetrahedron_physical(p));
}

TEST_CASE("random physical qubits satisfy both constraint sets") {
    const auto pom = tetrahedron_pom();
    std::mt19937_64 gen(31);
    for (int i = 0; i < 10000; ++i) {
        const Eigen::Vector3d r = random_bloch(gen);
        const CMatrix rho = qubit_state(r);
        const auto p = pom.probabilities(rho);
        CHECK(tetrahedron_physical(p));
        // sum_k a_k = 0 and sum_k (r.a_k)^2 = (4/3)|r|^2.
        CHECK(sum_sq(p) == doctest::Approx(0.25 * (1 + r.squaredNorm() / 3)));
        CHECK(bb84_constraints(bb84_probabilities(rho)));
        // Linear inversion of exact probabilities recovers the state.
        CHECK((pom.invert(p) - rho).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("BB84 POM and constraints") {
    const auto pom = bb84_pom();
    CMatrix total = CMatrix::Zero(2, 2);
    for (const auto &m : pom)
        total += m;
    CHECK((total - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK(bb84_constraints({0.25, 0.25, 0.25, 0.25}));
    const auto p0 = bb84_probabilities(qubit_state(Eigen::Vector3d(0, 0, 1)));
    CHECK(p0[0] == doctest::Approx(0.5));
    CHECK(p0[1] == doctest::Approx(0.0));
    CHECK(p0[2] == doctest::Approx(0.25));
    CHECK(p0[3] == doctest::Approx(0.25));
    CHECK(bb84_constraints(p0));
    CHECK(!bb84_constraints({0.3, 0.3, 0.2, 0.2}));
    CHECK(!bb84_constraints({0.5, 0.0, 0.5, 0.0}));
}

TEST_CASE("bb84_discard_fix examples") {
    auto fixed = bb84_discard_fix({25, 25, 30, 20});
    CHECK(fixed.effective_total == 100);
    CHECK(fixed.frequencies == Probabilities4{0.25, 0.25, 0.30, 0.20});

    fixed = bb84_discard_fix({25, 25, 99, 25});
    CHECK(fixed.effective_total == 100);
    CHECK(fixed.frequencies == Probabilities4{0.25, 0.25, 0.25, 0.25});

    CHECK_THROWS_AS(bb84_discard_fix({0, 0, 0, 5}), NegativePseudoCount);
    CHECK_THROWS_AS(bb84_discard_fix({1, 2, 7, 4}), NegativePseudoCount);
}

TEST_CASE("bb84_discard_fix restores the linear constraints only") {
    std::mt19937_64 gen(32);
    std::uniform_int_distribution<std::uint64_t> u(0, 200);
    int tried = 0;
    while (tried < 10000) {
        const Bb84Counts c{u(gen), u(gen), u(gen), u(gen)};
        if (c.n0 + c.n1 < c.nminus || c.n0 + c.n1 == 0)
            continue;
        ++tried;
        const auto f = bb84_discard_fix(c).frequencies;
        CHECK(std::abs(f[0] + f[1] - 0.5) <= 1e-15);
        CHECK(std::abs(f[2] + f[3] - 0.5) <= 1e-15);
    }

    // Counterexample: all Z clicks on 0 and no minus clicks gives a Bloch
    // vector of length sqrt(2).
    const auto f = bb84_discard_fix({50, 0, 50, 0}).frequencies;
    CHECK(f == Probabilities4{0.5, 0.0, 0.5, 0.0});
    const double quad = (f[0] - f[1]) * (f[0] - f[1]) + (f[2] - f[3]) * (f[2] - f[3]);
    CHECK(quad == doctest::Approx(0.5));
    CHECK(!bb84_constraints(f));
}

TEST_CASE("orthogonal leg: no physical reconstruction unless N is a multiple of 3") {
    const auto pom = tetrahedron_pom();
    // True state orthogonal to leg 1, so leg 1 never clicks.
    const auto p = pom.probabilities(qubit_state(-pom.axes[0]));
    CHECK(std::abs(p[0]) <= 1e-15);

    for (int n = 1; n <= 20; ++n) {
        int physical = 0;
        for (int a = 0; a <= n; ++a)
            for (int b = 0; a + b <= n; ++b) {
                const int c = n - a - b;
                const Probabilities4 f{0.0, double(a) / n, double(b) / n, double(c) / n};
                if (min_eigenvalue(pom.invert(f)) >= -1e-12)
                    ++physical;
            }
        if (n % 3 == 0)
            CHECK(physical == 1);
        else
            CHECK(physical == 0);
    }
}
