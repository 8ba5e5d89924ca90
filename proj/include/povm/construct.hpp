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
#include <numbers>
#include <optional>
#include <vector>

#include "povm/classify.hpp"
#include "povm/random.hpp"

namespace povm {

/// Basis of the real space of d x d Hermitian matrices, in scan order:
/// diagonal units E_kk, then symmetric pairs E_kl + E_lk, then
/// antisymmetric pairs -i E_kl + i E_lk (k < l, row-major).
template <class Real>
struct HermBasis {
  Index dim = 0;
  std::vector<CMatrix<Real>> ops;
};

template <class Real = double>
HermBasis<Real> herm_basis(Index d) {
  if (d < 1) throw Error(ErrorKind::BadDimension, "dimension must be positive");
  HermBasis<Real> b;
  b.dim = d;
  for (Index k = 0; k < d; ++k) {
    CMatrix<Real> m = CMatrix<Real>::Zero(d, d);
    m(k, k) = Real(1);
    b.ops.push_back(std::move(m));
  }
  for (Index k = 0; k < d; ++k) {
    for (Index l = k + 1; l < d; ++l) {
      CMatrix<Real> m = CMatrix<Real>::Zero(d, d);
      m(k, l) = m(l, k) = Real(1);
      b.ops.push_back(std::move(m));
    }
  }
  for (Index k = 0; k < d; ++k) {
    for (Index l = k + 1; l < d; ++l) {
      CMatrix<Real> m = CMatrix<Real>::Zero(d, d);
      m(k, l) = Complex<Real>(0, -1);
      m(l, k) = Complex<Real>(0, 1);
      b.ops.push_back(std::move(m));
    }
  }
  return b;
}

/// Rank-1 PVM of the computational basis.
template <class Real = double>
Povm<Real> onb_pvm(Index d) {
  if (d < 1) throw Error(ErrorKind::BadDimension, "dimension must be positive");
  std::vector<CMatrix<Real>> effects;
  for (Index k = 0; k < d; ++k) {
    CMatrix<Real> e = CMatrix<Real>::Zero(d, d);
    e(k, k) = Real(1);
    effects.push_back(std::move(e));
  }
  return Povm<Real>(d, std::move(effects));
}

namespace detail {

template <class Real>
bool outside_span(std::vector<CMatrix<Real>> span, const CMatrix<Real>& candidate,
                  const Tolerances& tol) {
  span.push_back(candidate);
  const auto ind = linearly_independent(span, tol);
  return ind.independent && !ind.borderline;
}

template <class Real>
void require_extremal_rank1(const Povm<Real>& p, const Tolerances& tol) {
  bool ok = false;
  try {
    ok = is_extremal_rank1(p, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotRank1) throw;
  }
  if (!ok) throw Error(ErrorKind::NotExtremalRank1, "input is not an extremal rank-1 POVM");
}

}  // namespace detail

/// Adds one outcome to an extremal rank-1 POVM using the rank-1 projection
/// `projection`, which must lie outside the real span of the effects:
///   A'(j) = T^{-1/2} A(j) T^{-1/2},  A'(N+1) = T^{-1/2} P T^{-1/2},
/// with T = I + P.
template <class Real>
Povm<Real> extend_extremal_with(const Povm<Real>& p, const CMatrix<Real>& projection,
                                const Tolerances& tol = {}) {
  detail::require_extremal_rank1(p, tol);
  const auto pruned = prune_zero_effects(p, tol).povm;
  if (pruned.size() >= static_cast<std::size_t>(p.dim() * p.dim())) {
    throw Error(ErrorKind::AlreadyMaximal, "POVM already has d^2 nonzero effects");
  }
  if (projection.rows() != p.dim() || projection.cols() != p.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "projection has the wrong dimension");
  }
  if (!is_projection(projection, tol) || rank_of(projection, tol) != 1) {
    throw Error(ErrorKind::NotRank1, "P must be a one-dimensional projection");
  }
  if (!detail::outside_span(pruned.effects(), projection, tol)) {
    throw Error(ErrorKind::InSpan, "P lies in the span of the effects");
  }

  const Index d = p.dim();
  const CMatrix<Real> r = inv_sqrt((CMatrix<Real>::Identity(d, d) + projection).eval(), tol);
  std::vector<CMatrix<Real>> out;
  out.reserve(p.size() + 1);
  for (const auto& e : p) out.push_back(r * e * r);
  out.push_back(r * projection * r);
  return Povm<Real>(d, std::move(out));
}

/// Picks P by scanning the Hermitian basis for the first operator outside
/// the span, then the first of its eigenprojections outside the span.
template <class Real>
CMatrix<Real> extension_projection(const Povm<Real>& p, const Tolerances& tol = {}) {
  const auto span = prune_zero_effects(p, tol).povm.effects();
  for (const auto& s : herm_basis<Real>(p.dim()).ops) {
    if (!detail::outside_span(span, s, tol)) continue;
    const auto spec = eig_herm(s, tol);
    for (Index k = 0; k < spec.size(); ++k) {
      CMatrix<Real> proj = spec.projection(k);
      if (detail::outside_span(span, proj, tol)) return proj;
    }
  }
  throw Error(ErrorKind::AlreadyMaximal, "no projection outside the span of the effects");
}

template <class Real>
Povm<Real> extend_extremal(const Povm<Real>& p, const Tolerances& tol = {}) {
  detail::require_extremal_rank1(p, tol);
  if (nonzero_count(p, tol) >= static_cast<std::size_t>(p.dim() * p.dim())) {
    throw Error(ErrorKind::AlreadyMaximal, "POVM already has d^2 nonzero effects");
  }
  return extend_extremal_with(p, extension_projection(p, tol), tol);
}

/// Extremal rank-1 POVM with exactly n outcomes, for d <= n <= d^2.
template <class Real = double>
Povm<Real> construct_extremal_rank1(Index d, Index n, const Tolerances& tol = {}) {
  if (d < 1) throw Error(ErrorKind::BadDimension, "dimension must be positive");
  if (n < d || n > d * d) {
    throw Error(ErrorKind::OutOfRange, "outcome count must lie in [d, d^2]");
  }
  Povm<Real> p = onb_pvm<Real>(d);
  for (Index k = d; k < n; ++k) p = extend_extremal(p, tol);
  return p;
}

/// The three-outcome extremal rank-1 qubit POVM obtained from the sigma_x
/// PVM with P = (I + sigma_z) / 2, written out in closed form.
template <class Real = double>
Povm<Real> qubit_example() {
  using C = Complex<Real>;
  const Real s2 = std::sqrt(Real(2));
  CMatrix<Real> id = CMatrix<Real>::Identity(2, 2);
  CMatrix<Real> sx(2, 2);
  sx << C(0), C(1), C(1), C(0);
  CMatrix<Real> sz(2, 2);
  sz << C(1), C(0), C(0), C(-1);
  const Real a = Real(4) / (Real(3) * s2);
  std::vector<CMatrix<Real>> effects;
  effects.push_back(Real(3) / Real(8) * (id + a * sx - sz / Real(3)));
  effects.push_back(Real(3) / Real(8) * (id - a * sx - sz / Real(3)));
  effects.push_back((id + sz) / Real(4));
  return Povm<Real>(2, std::move(effects));
}

/// Three rank-2 effects on C^4,
///   A(j) = 1/3 (I + w^j (|1><3| + |2><4|) + conj(w^j) (|3><1| + |4><2|)),
/// w = exp(2 pi i / 3). Extremal, yet no effect is a projection or rank-1.
template <class Real = double>
Povm<Real> type_d_example() {
  std::vector<CMatrix<Real>> effects;
  for (int j = 1; j <= 3; ++j) {
    const Real angle = Real(2) * std::numbers::pi_v<Real> * Real(j) / Real(3);
    const Complex<Real> w = std::polar(Real(1), angle);
    CMatrix<Real> a = CMatrix<Real>::Identity(4, 4);
    a(0, 2) = a(1, 3) = w;
    a(2, 0) = a(3, 1) = std::conj(w);
    effects.push_back(a / Real(3));
  }
  return Povm<Real>(4, std::move(effects));
}

/// Effects S^{-1/2} G_j G_j^dagger S^{-1/2} with S = sum_j G_j G_j^dagger
/// and G_j complex Ginibre of shape d x rank. rank = 1 gives rank-1 POVMs.
template <class Real = double>
Povm<Real> random_povm(Index d, Index n, std::uint64_t seed, Index rank = 0,
                       const Tolerances& tol = {}) {
  if (d < 1) throw Error(ErrorKind::BadDimension, "dimension must be positive");
  if (n < 1) throw Error(ErrorKind::OutOfRange, "need at least one outcome");
  if (rank <= 0) rank = d;
  Rng rng(seed);
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<CMatrix<Real>> raw;
    CMatrix<Real> sum = CMatrix<Real>::Zero(d, d);
    for (Index j = 0; j < n; ++j) {
      const CMatrix<Real> g = complex_gaussian<Real>(d, rank, rng);
      raw.push_back(g * g.adjoint());
      sum += raw.back();
    }
    CMatrix<Real> r;
    try {
      r = inv_sqrt(sum, tol);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotPositiveDefinite) continue;
      throw;
    }
    std::vector<CMatrix<Real>> effects;
    for (const auto& m : raw) {
      CMatrix<Real> e = r * m * r;
      effects.push_back((e + e.adjoint()) * Real(0.5));
    }
    return Povm<Real>(d, std::move(effects));
  }
  throw Error(ErrorKind::SingularSum, "random effects did not span the space");
}

/// PVM onto the blocks of a random orthonormal basis; `block_ranks` must
/// sum to d.
template <class Real = double>
Povm<Real> random_pvm(const std::vector<Index>& block_ranks, std::uint64_t seed) {
  Index d = 0;
  for (Index r : block_ranks) {
    if (r < 1) throw Error(ErrorKind::OutOfRange, "block ranks must be positive");
    d += r;
  }
  if (d < 1) throw Error(ErrorKind::BadDimension, "empty block list");
  Rng rng(seed);
  const CMatrix<Real> u = random_unitary<Real>(d, rng);
  std::vector<CMatrix<Real>> effects;
  Index col = 0;
  for (Index r : block_ranks) {
    const CMatrix<Real> block = u.middleCols(col, r);
    CMatrix<Real> e = block * block.adjoint();
    effects.push_back((e + e.adjoint()) * Real(0.5));
    col += r;
  }
  return Povm<Real>(d, std::move(effects));
}

template <class Real>
struct TypeDCandidate {
  Povm<Real> povm;
  PovmClass classification;
  std::uint64_t seed = 0;
};

/// Search harness for type-(d) extremal POVMs: draws random rank-1 POVMs
/// with n outcomes, merges outcomes by a random relabeling to `groups`
/// outcomes, and keeps those classified as type (d).
template <class Real = double>
std::vector<TypeDCandidate<Real>> search_type_d(Index d, Index n, std::size_t groups,
                                                std::size_t trials, std::uint64_t seed,
                                                const Tolerances& tol = {}) {
  if (groups < 1 || static_cast<Index>(groups) > n) {
    throw Error(ErrorKind::OutOfRange, "group count must lie in [1, n]");
  }
  std::vector<TypeDCandidate<Real>> hits;
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = rng();
    const auto base = random_povm<Real>(d, n, trial_seed, 1, tol);
    std::vector<std::size_t> map(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < map.size(); ++k) {
      map[k] = k < groups ? k : static_cast<std::size_t>(rng() % groups);
    }
    const auto merged = relabel(base, RelabelMap(std::move(map), groups));
    const auto c = classify(merged, tol);
    if (c.type == ExtremalType::D) hits.push_back({merged, c, trial_seed});
  }
  return hits;
}

}  // namespace povm
