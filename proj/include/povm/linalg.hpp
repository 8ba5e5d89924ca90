// Copyright 2026 The povm-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "povm/error.hpp"
#include "povm/tolerance.hpp"

namespace povm {

using Index = Eigen::Index;

template <class Real>
using Complex = std::complex<Real>;
template <class Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Hermitian operators share the dense complex storage; the invariant is
/// checked at the entry of each operation.
template <class Real>
using HermMatrix = CMatrix<Real>;

namespace detail {

template <class Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <class Derived>
CMatrix<RealOf<Derived>> to_complex(const Eigen::MatrixBase<Derived>& m) {
  using Real = RealOf<Derived>;
  return m.template cast<Complex<Real>>();
}

template <class Real>
void require_square(const CMatrix<Real>& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "expected a non-empty square matrix");
  }
}

template <class Real>
Real hermitian_defect(const CMatrix<Real>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <class Real>
void require_hermitian(const CMatrix<Real>& m, const Tolerances& tol) {
  require_square(m);
  const Real scale = std::max(Real(1), m.cwiseAbs().maxCoeff());
  const Real defect = hermitian_defect(m);
  if (!(defect <= Real(tol.herm_tol) * scale)) {
    throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian", std::nullopt,
                static_cast<double>(defect));
  }
}

// Rotates v so that its first non-negligible component is real positive.
template <class Real>
void fix_phase(Eigen::Ref<CVector<Real>> v) {
  const Real cutoff = Real(1e3) * std::numeric_limits<Real>::epsilon() * v.norm();
  for (Index i = 0; i < v.size(); ++i) {
    const Real a = std::abs(v(i));
    if (a > cutoff) {
      v *= std::conj(v(i)) / a;
      v(i) = Complex<Real>(std::real(v(i)), Real(0));
      return;
    }
  }
}

template <class Real>
RVector<Real> eigenvalues_descending(const CMatrix<Real>& herm) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

template <class Real>
Real rank_cutoff(const RVector<Real>& eigenvalues, const Tolerances& tol) {
  return Real(tol.rank_tol) * std::max(Real(1), eigenvalues.cwiseAbs().maxCoeff());
}

}  // namespace detail

template <class Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  const auto a = detail::to_complex(m);
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  using Real = detail::RealOf<Derived>;
  const Real scale = std::max(Real(1), a.cwiseAbs().maxCoeff());
  return detail::hermitian_defect(a) <= Real(tol.herm_tol) * scale;
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues in descending
/// order. Each eigenvector is phase-fixed so that its first nonzero
/// component is real positive.
template <class Real>
struct SpectralDecomposition {
  RVector<Real> eigenvalues;
  CMatrix<Real> eigenvectors;  // columns, orthonormal

  Index size() const { return eigenvalues.size(); }

  CMatrix<Real> projection(Index k) const {
    return eigenvectors.col(k) * eigenvectors.col(k).adjoint();
  }

  std::vector<CMatrix<Real>> projections() const {
    std::vector<CMatrix<Real>> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Index k = 0; k < size(); ++k) out.push_back(projection(k));
    return out;
  }

  CMatrix<Real> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<Complex<Real>>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

template <class Derived>
SpectralDecomposition<detail::RealOf<Derived>> eig_herm(
    const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  using Real = detail::RealOf<Derived>;
  CMatrix<Real> a = detail::to_complex(m);
  detail::require_hermitian(a, tol);
  a = (a + a.adjoint()).eval() * Real(0.5);

  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(a);
  SpectralDecomposition<Real> out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  for (Index k = 0; k < out.eigenvectors.cols(); ++k) {
    detail::fix_phase<Real>(out.eigenvectors.col(k));
  }
  return out;
}

template <class Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  using Real = detail::RealOf<Derived>;
  CMatrix<Real> a = detail::to_complex(m);
  detail::require_hermitian(a, tol);
  return detail::eigenvalues_descending<Real>(a).minCoeff() >= -Real(tol.psd_tol);
}

/// Number of eigenvalues with |lambda| > rank_tol * max(1, |lambda|_max).
template <class Derived>
Index rank_of(const Eigen::MatrixBase<Derived>& m, const Tolerances& tol = {}) {
  using Real = detail::RealOf<Derived>;
  CMatrix<Real> a = detail::to_complex(m);
  detail::require_hermitian(a, tol);
  const RVector<Real> ev = detail::eigenvalues_descending<Real>(a);
  const Real cutoff = detail::rank_cutoff(ev, tol);
  return static_cast<Index>((ev.array().abs() > cutoff).count());
}

/// R = m^{-1/2} for a positive definite Hermitian m.
template <class Derived>
HermMatrix<detail::RealOf<Derived>> inv_sqrt(const Eigen::MatrixBase<Derived>& m,
                                             const Tolerances& tol = {}) {
  using Real = detail::RealOf<Derived>;
  const auto spec = eig_herm(m, tol);
  const Real smallest = spec.eigenvalues.minCoeff();
  if (!(smallest > Real(tol.psd_tol))) {
    throw Error(ErrorKind::NotPositiveDefinite, "smallest eigenvalue is not positive",
                std::nullopt, static_cast<double>(smallest));
  }
  const CVector<Real> scale =
      spec.eigenvalues.array().rsqrt().matrix().template cast<Complex<Real>>();
  CMatrix<Real> r = spec.eigenvectors * scale.asDiagonal() * spec.eigenvectors.adjoint();
  return (r + r.adjoint()) * Real(0.5);
}

/// Row-major flattening: entry (i, j) lands at i * cols + j.
template <class Derived>
CVector<detail::RealOf<Derived>> vectorize(const Eigen::MatrixBase<Derived>& m) {
  using Real = detail::RealOf<Derived>;
  const CMatrix<Real> a = detail::to_complex(m);
  CVector<Real> v(a.size());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  }
  return v;
}

template <class Real>
struct Independence {
  bool independent = false;
  /// Independent, but the smallest relative singular value lies within
  /// Tolerances::borderline_factor of the cutoff.
  bool borderline = false;
  bool hermitian_inputs = false;
  Index numerical_rank = 0;
  /// sigma_min / sigma_max of the column-normalized operator matrix; zero
  /// when there are more operators than the space dimension.
  Real relative_gap = 0;
  /// Unit-norm coefficients with sum_k c_k ops[k] ~ 0, present iff
  /// dependent. Real-valued (zero imaginary parts) for Hermitian inputs.
  std::optional<CVector<Real>> dependence;
  /// || sum_k c_k ops[k] ||_F for the reported dependence.
  Real residual = 0;

  RVector<Real> real_dependence() const { return dependence->real(); }
};

/// Tests whether the operators are linearly independent by a relative-cutoff
/// rank computation on their column-normalized vectorizations. Hermitian
/// sets use the stacked real/imaginary representation, whose real rank
/// equals the complex rank, so the returned dependence is real.
template <class Real>
Independence<Real> linearly_independent(std::span<const CMatrix<Real>> ops,
                                        const Tolerances& tol = {}) {
  if (ops.empty()) throw Error(ErrorKind::EmptyInput, "no operators given");
  const Index rows = ops.front().rows();
  const Index cols = ops.front().cols();
  for (const auto& op : ops) {
    if (op.rows() != rows || op.cols() != cols) {
      throw Error(ErrorKind::DimensionMismatch, "operators differ in shape");
    }
  }
  const Index count = static_cast<Index>(ops.size());
  const Index space = rows * cols;

  Independence<Real> out;
  out.hermitian_inputs = std::all_of(ops.begin(), ops.end(), [&](const CMatrix<Real>& op) {
    return is_hermitian(op, tol);
  });

  RVector<Real> norms(count);
  for (Index k = 0; k < count; ++k) norms(k) = ops[static_cast<std::size_t>(k)].norm();

  auto finish_dependent = [&](CVector<Real> coeffs) {
    for (Index k = 0; k < count; ++k) coeffs(k) /= norms(k) > Real(0) ? norms(k) : Real(1);
    coeffs /= coeffs.norm();
    // Phase convention: the first entry of (near-)maximal modulus is real
    // and positive.
    const Real peak = coeffs.cwiseAbs().maxCoeff();
    for (Index k = 0; k < count; ++k) {
      if (std::abs(coeffs(k)) >= peak * (Real(1) - Real(1e-9))) {
        coeffs *= std::conj(coeffs(k)) / std::abs(coeffs(k));
        break;
      }
    }
    if (out.hermitian_inputs) coeffs = coeffs.real().template cast<Complex<Real>>();
    CMatrix<Real> sum = CMatrix<Real>::Zero(rows, cols);
    for (Index k = 0; k < count; ++k) sum += coeffs(k) * ops[static_cast<std::size_t>(k)];
    out.residual = sum.norm();
    out.dependence = std::move(coeffs);
    return out;
  };

  for (Index k = 0; k < count; ++k) {
    if (norms(k) == Real(0)) {
      CVector<Real> e = CVector<Real>::Zero(count);
      e(k) = Real(1);
      return finish_dependent(std::move(e));
    }
  }

  auto analyse = [&](const auto& sv, const auto& v_last) {
    const Real top = sv.size() > 0 ? sv(0) : Real(0);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > Real(tol.indep_tol) * top) ++rank;
    }
    out.numerical_rank = rank;
    out.relative_gap = (count <= sv.size() && top > Real(0)) ? sv(count - 1) / top : Real(0);
    out.independent = rank == count;
    if (out.independent) {
      out.borderline =
          out.relative_gap <= Real(Tolerances::borderline_factor * tol.indep_tol);
      return out;
    }
    return finish_dependent(v_last);
  };

  if (out.hermitian_inputs) {
    RMatrix<Real> a(2 * space, count);
    for (Index k = 0; k < count; ++k) {
      const CVector<Real> v = vectorize(ops[static_cast<std::size_t>(k)]) / norms(k);
      a.col(k).head(space) = v.real();
      a.col(k).tail(space) = v.imag();
    }
    Eigen::JacobiSVD<RMatrix<Real>> svd(a, Eigen::ComputeFullV);
    CVector<Real> last = svd.matrixV().col(count - 1).template cast<Complex<Real>>();
    return analyse(svd.singularValues(), std::move(last));
  }

  CMatrix<Real> a(space, count);
  for (Index k = 0; k < count; ++k) {
    a.col(k) = vectorize(ops[static_cast<std::size_t>(k)]) / norms(k);
  }
  Eigen::JacobiSVD<CMatrix<Real>> svd(a, Eigen::ComputeFullV);
  CVector<Real> last = svd.matrixV().col(count - 1);
  return analyse(svd.singularValues(), std::move(last));
}

template <class Real>
Independence<Real> linearly_independent(const std::vector<CMatrix<Real>>& ops,
                                        const Tolerances& tol = {}) {
  return linearly_independent(std::span<const CMatrix<Real>>(ops), tol);
}

}  // namespace povm
