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

#include <cstdint>
#include <random>

#include "povm/linalg.hpp"

namespace povm {

using Rng = std::mt19937_64;

/// Matrix with i.i.d. complex standard normal entries (unit variance).
template <class Real>
CMatrix<Real> complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1) / std::sqrt(Real(2)));
  CMatrix<Real> g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex<Real>(normal(rng), normal(rng));
  }
  return g;
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// diagonal phases of R removed.
template <class Real>
CMatrix<Real> random_unitary(Index d, Rng& rng) {
  const CMatrix<Real> g = complex_gaussian<Real>(d, d, rng);
  Eigen::HouseholderQR<CMatrix<Real>> qr(g);
  CMatrix<Real> q = qr.householderQ();
  const CMatrix<Real> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index k = 0; k < d; ++k) {
    const Real a = std::abs(r(k, k));
    if (a > Real(0)) q.col(k) *= r(k, k) / a;
  }
  return q;
}

}  // namespace povm
