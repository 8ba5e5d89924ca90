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

#include <cmath>
#include <complex>
#include <vector>

#include "povm/construct.hpp"

namespace povm::testing {

using M = CMatrix<double>;
using C = std::complex<double>;

inline M identity(Index d) { return M::Identity(d, d); }

inline M sigma_x() {
  M m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline M sigma_y() {
  M m(2, 2);
  m << 0, C(0, -1), C(0, 1), 0;
  return m;
}

inline M sigma_z() {
  M m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// |k><l| in dimension d.
inline M ket_bra(Index d, Index k, Index l) {
  M m = M::Zero(d, d);
  m(k, l) = 1;
  return m;
}

/// {(I + sx)/4, (I - sx)/4, (I + sz)/4, (I - sz)/4}.
inline Povm<double> four_outcome_qubit() {
  const M i = identity(2);
  return Povm<double>({(i + sigma_x()) / 4.0, (i - sigma_x()) / 4.0, (i + sigma_z()) / 4.0,
                       (i - sigma_z()) / 4.0});
}

inline Povm<double> half_half() { return Povm<double>({identity(2) / 2.0, identity(2) / 2.0}); }

inline M random_hermitian(Index d, Rng& rng) {
  const M g = complex_gaussian<double>(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

inline double max_effect_distance(const Povm<double>& a, const Povm<double>& b) {
  double out = 0;
  for (std::size_t j = 0; j < a.size(); ++j) out = std::max(out, (a[j] - b[j]).norm());
  return out;
}

}  // namespace povm::testing
