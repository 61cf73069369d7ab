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

#include "qtomo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace qtomo {

namespace {

void check_density(const CMatrix &rho, const char *which) {
    const double lo = min_eigenvalue(rho);
    if (lo < -kPsdClip)
        throw NotPositiveSemidefinite(lo);
    if (std::abs(rho.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument(std::string(which) + " does not have unit trace");
}

// Eigenvalues at or below this count as outside the support.
constexpr double kSupportCut = 1e-14;

std::int64_t bin_index(double x, double width) {
    return static_cast<std::int64_t>(std::floor(x / width));
}

} // namespace

double fidelity_pure(const CVector &psi, const CMatrix &rho_hat) {
    if (psi.size() != rho_hat.rows())
        throw DimensionMismatch("fidelity_pure: ket and matrix dimensions differ");
    return psi.dot(rho_hat * psi).real();
}

double fidelity_uhlmann(const CMatrix &rho1, const CMatrix &rho2) {
    if (rho1.rows() != rho2.rows())
        throw DimensionMismatch("fidelity_uhlmann: dimensions differ");
    check_density(rho1, "first argument");
    check_density(rho2, "second argument");
    // Square roots turn rounding-level eigenvalues (~1e-17) into ~1e-8
    // contributions, so work inside the support of the lower-rank argument.
    const auto e1 = eig_hermitian<double>(rho1);
    const auto e2 = eig_hermitian<double>(rho2);
    const auto rank = [](const RVector &ev) { return (ev.array() > kSupportCut).count(); };
    const bool first = rank(e1.eigenvalues) <= rank(e2.eigenvalues);
    const auto &sys = first ? e1 : e2;
    const CMatrix &other = first ? rho2 : rho1;

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < sys.eigenvalues.size(); ++i)
        if (sys.eigenvalues(i) > kSupportCut)
            keep.push_back(i);
    CMatrix basis(sys.eigenvectors.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        basis.col(static_cast<Eigen::Index>(j)) =
            sys.eigenvectors.col(keep[j]) * std::sqrt(sys.eigenvalues(keep[j]));
    const CMatrix inner = basis.adjoint() * other * basis;
    const RVector ev = eigenvalues_hermitian<double>((inner + inner.adjoint()) / 2.0);
    const double tr = ev.cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

Purity purity(const CMatrix &rho_hat) {
    const CMatrix h = symmetrized(rho_hat);
    return {trace_product(h, h).real(), min_eigenvalue(h) >= -1e-10};
}

ScenarioStats aggregate(std::span<const double> samples, double f0,
                        std::span<const double> min_eigs) {
    if (samples.size() < 2)
        throw std::invalid_argument("aggregate needs at least two samples");
    ScenarioStats s;
    s.runs = static_cast<std::int64_t>(samples.size());
    const auto r = static_cast<double>(samples.size());
    // Deviations from f0 keep the identical-samples case exact.
    double dev = 0, sq = 0;
    std::int64_t above = 0, below = 0;
    for (double f : samples) {
        dev += f - f0;
        sq += (f - f0) * (f - f0);
        above += f > 1.0;
        below += f < 0.0;
    }
    s.mean = f0 + dev / r;
    s.mse = sq / r;
    s.bias_sq = (dev / r) * (dev / r);
    s.variance = s.mse - s.bias_sq;
    s.frac_above_one = static_cast<double>(above) / r;
    s.frac_below_zero = static_cast<double>(below) / r;
    if (!min_eigs.empty()) {
        const auto bad = std::count_if(min_eigs.begin(), min_eigs.end(),
                                       [](double e) { return e < -1e-10; });
        s.frac_nonphysical_estimates = static_cast<double>(bad) / static_cast<double>(min_eigs.size());
    }
    return s;
}

std::vector<HistogramBin> histogram(std::span<const double> samples, double bin_width) {
    if (!(bin_width > 0))
        throw std::invalid_argument("bin width must be positive");
    std::vector<HistogramBin> bins;
    if (samples.empty())
        return bins;
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    const std::int64_t first = bin_index(*lo, bin_width);
    const std::int64_t last = bin_index(*hi, bin_width);
    bins.resize(static_cast<std::size_t>(last - first + 1));
    for (std::size_t b = 0; b < bins.size(); ++b)
        bins[b].left = static_cast<double>(first + static_cast<std::int64_t>(b)) * bin_width;
    for (double x : samples)
        ++bins[static_cast<std::size_t>(bin_index(x, bin_width) - first)].count;
    return bins;
}

void write_histogram_csv(std::ostream &out, std::span<const double> lin,
                         std::span<const double> mle, double bin_width) {
    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> merged;
    for (const auto &b : histogram(lin, bin_width))
        merged[std::llround(b.left / bin_width)].first = b.count;
    for (const auto &b : histogram(mle, bin_width))
        merged[std::llround(b.left / bin_width)].second = b.count;
    if (!merged.empty()) {
        // Fill gaps so the output is one contiguous range.
        const std::int64_t first = merged.begin()->first;
        const std::int64_t last = merged.rbegin()->first;
        for (std::int64_t m = first; m <= last; ++m)
            merged.try_emplace(m, 0, 0);
    }
    out << "bin_left,count_lin,count_mle\n" << std::setprecision(12);
    for (const auto &[m, c] : merged)
        out << static_cast<double>(m) * bin_width << ',' << c.first << ',' << c.second << '\n';
}

} // namespace qtomo
