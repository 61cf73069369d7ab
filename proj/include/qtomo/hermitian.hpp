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

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qtomo {

template <typename Scalar>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = ComplexMatrix<double>;
using CVector = ComplexVector<double>;
using RVector = RealVector<double>;
using cplx = std::complex<double>;

/// Absolute max-norm tolerance on H - H^dagger accepted as "Hermitian".
inline constexpr double kHermitianTol = 1e-10;
/// Eigenvalues in [-kPsdClip, 0) are treated as zero by PSD-requiring code.
inline constexpr double kPsdClip = 1e-9;

class NotHermitian : public std::invalid_argument {
  public:
    NotHermitian(double asymmetry)
        : std::invalid_argument("matrix is not Hermitian: max |H - H^dagger| = " +
                                std::to_string(asymmetry)),
          asymmetry_(asymmetry) {}
    double asymmetry() const noexcept { return asymmetry_; }

  private:
    double asymmetry_;
};

class NotPositiveSemidefinite : public std::domain_error {
  public:
    NotPositiveSemidefinite(double min_eig)
        : std::domain_error("matrix is not positive semidefinite: min eigenvalue = " +
                            std::to_string(min_eig)),
          min_eig_(min_eig) {}
    double min_eigenvalue() const noexcept { return min_eig_; }

  private:
    double min_eig_;
};

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Eigenvalues ascending, eigenvectors as the matching columns.
template <typename Scalar> struct EigenSystem {
    RealVector<Scalar> eigenvalues;
    ComplexMatrix<Scalar> eigenvectors;
};

template <typename Derived>
typename Derived::RealScalar max_asymmetry(const Eigen::MatrixBase<Derived> &h) {
    if (h.rows() == 0)
        return 0;
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived> &h) {
    if (h.size() == 0)
        return 0;
    return h.cwiseAbs().maxCoeff();
}

/// Returns (H + H^dagger)/2 after checking the asymmetry is within tolerance.
template <typename Scalar>
ComplexMatrix<Scalar> symmetrized(const ComplexMatrix<Scalar> &h,
                                  Scalar tol = Scalar(kHermitianTol)) {
    if (h.rows() != h.cols() || h.rows() == 0)
        throw DimensionMismatch("expected a nonempty square matrix");
    if (!h.allFinite())
        throw std::invalid_argument("matrix has non-finite entries");
    const Scalar asym = max_asymmetry(h);
    if (asym > tol)
        throw NotHermitian(static_cast<double>(asym));
    return (h + h.adjoint()) / Scalar(2);
}

template <typename Scalar>
EigenSystem<Scalar> eig_hermitian(const ComplexMatrix<Scalar> &h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(symmetrized(h));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("Hermitian eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Scalar>
RealVector<Scalar> eigenvalues_hermitian(const ComplexMatrix<Scalar> &h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> solver(symmetrized(h),
                                                               Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("Hermitian eigensolver failed to converge");
    return solver.eigenvalues();
}

/// PSD square root. Eigenvalues within the clipping window are set to zero;
/// anything more negative throws NotPositiveSemidefinite.
template <typename Scalar>
ComplexMatrix<Scalar> sqrt_psd(const ComplexMatrix<Scalar> &a) {
    const auto es = eig_hermitian(a);
    const Scalar lo = es.eigenvalues.minCoeff();
    if (lo < -Scalar(kPsdClip))
        throw NotPositiveSemidefinite(static_cast<double>(lo));
    const RealVector<Scalar> roots = es.eigenvalues.cwiseMax(Scalar(0)).cwiseSqrt();
    ComplexMatrix<Scalar> b =
        es.eigenvectors * roots.template cast<std::complex<Scalar>>().asDiagonal() *
        es.eigenvectors.adjoint();
    return (b + b.adjoint()) / Scalar(2);
}

/// Kronecker product: result((i,j),(k,l)) = a(i,k) * b(j,l).
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
kron(const Eigen::MatrixBase<DerivedA> &a, const Eigen::MatrixBase<DerivedB> &b) {
    Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
        a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
    return out;
}

/// tr(AB) without forming the product.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar trace_product(const Eigen::MatrixBase<DerivedA> &a,
                                        const Eigen::MatrixBase<DerivedB> &b) {
    if (a.rows() != b.cols() || a.cols() != b.rows())
        throw DimensionMismatch("trace_product: incompatible dimensions");
    return a.cwiseProduct(b.transpose()).sum();
}

template <typename Scalar> Scalar min_eigenvalue(const ComplexMatrix<Scalar> &h) {
    return eigenvalues_hermitian(h).minCoeff();
}

template <typename Scalar> Scalar max_eigenvalue(const ComplexMatrix<Scalar> &h) {
    return eigenvalues_hermitian(h).maxCoeff();
}

/// Hermitian, unit trace and PSD, each within 1e-10.
template <typename Scalar> bool is_physical(const ComplexMatrix<Scalar> &h) {
    if (h.rows() != h.cols() || h.rows() == 0 || !h.allFinite())
        return false;
    if (max_asymmetry(h) > Scalar(kHermitianTol))
        return false;
    if (std::abs(h.trace().real() - Scalar(1)) > Scalar(1e-10))
        return false;
    return min_eigenvalue(h) >= -Scalar(1e-10);
}

/// Half the trace norm of the (Hermitian) difference.
template <typename Scalar>
Scalar trace_distance(const ComplexMatrix<Scalar> &a, const ComplexMatrix<Scalar> &b) {
    return eigenvalues_hermitian<Scalar>(a - b).cwiseAbs().sum() / Scalar(2);
}

} // namespace qtomo
