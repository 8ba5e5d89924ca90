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

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "povm/linalg.hpp"

namespace povm {

/// A finite-outcome POVM: an ordered list of effects on a common dimension.
///
/// Construction only checks shapes. The operator-level invariants
/// (positivity, normalization) are checked by `validate`, so that invalid
/// candidates can still be represented and reported on.
template <class Real = double>
class Povm {
 public:
  using Matrix = CMatrix<Real>;

  Povm() = default;

  explicit Povm(std::vector<Matrix> effects) : effects_(std::move(effects)) {
    if (effects_.empty()) throw Error(ErrorKind::EmptyInput, "a POVM needs at least one effect");
    dim_ = effects_.front().rows();
    check_shapes();
  }

  Povm(Index dim, std::vector<Matrix> effects) : dim_(dim), effects_(std::move(effects)) {
    if (effects_.empty()) throw Error(ErrorKind::EmptyInput, "a POVM needs at least one effect");
    check_shapes();
  }

  Index dim() const { return dim_; }
  std::size_t size() const { return effects_.size(); }
  const Matrix& operator[](std::size_t j) const { return effects_[j]; }
  const std::vector<Matrix>& effects() const { return effects_; }
  auto begin() const { return effects_.begin(); }
  auto end() const { return effects_.end(); }

  Matrix sum() const {
    Matrix s = Matrix::Zero(dim_, dim_);
    for (const auto& e : effects_) s += e;
    return s;
  }

  template <class Other>
  Povm<Other> cast() const {
    std::vector<CMatrix<Other>> out;
    for (const auto& e : effects_) out.push_back(e.template cast<Complex<Other>>());
    return Povm<Other>(dim_, std::move(out));
  }

 private:
  void check_shapes() const {
    if (dim_ < 1) throw Error(ErrorKind::BadDimension, "dimension must be positive");
    for (std::size_t j = 0; j < effects_.size(); ++j) {
      if (effects_[j].rows() != dim_ || effects_[j].cols() != dim_) {
        throw Error(ErrorKind::DimensionMismatch,
                    "effect " + std::to_string(j) + " is not " + std::to_string(dim_) + "x" +
                        std::to_string(dim_),
                    j);
      }
    }
  }

  Index dim_ = 0;
  std::vector<Matrix> effects_;
};

/// A total function from source outcomes to target outcomes, 0-based.
class RelabelMap {
 public:
  RelabelMap() = default;

  RelabelMap(std::vector<std::size_t> map, std::size_t target_size)
      : map_(std::move(map)), target_size_(target_size) {
    for (std::size_t k = 0; k < map_.size(); ++k) {
      if (map_[k] >= target_size_) {
        throw Error(ErrorKind::OutOfRange,
                    "relabel entry " + std::to_string(k) + " points outside the target", k);
      }
    }
  }

  static RelabelMap identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    for (std::size_t k = 0; k < n; ++k) m[k] = k;
    return RelabelMap(std::move(m), n);
  }

  std::size_t source_size() const { return map_.size(); }
  std::size_t target_size() const { return target_size_; }
  std::size_t operator()(std::size_t k) const { return map_[k]; }
  const std::vector<std::size_t>& indices() const { return map_; }

  friend bool operator==(const RelabelMap&, const RelabelMap&) = default;

 private:
  std::vector<std::size_t> map_;
  std::size_t target_size_ = 0;
};

/// g after f.
inline RelabelMap compose(const RelabelMap& g, const RelabelMap& f) {
  if (f.target_size() != g.source_size()) {
    throw Error(ErrorKind::MapSizeMismatch, "cannot compose maps of incompatible sizes");
  }
  std::vector<std::size_t> m(f.source_size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = g(f(k));
  return RelabelMap(std::move(m), g.target_size());
}

/// One failed invariant found by `check`.
struct Violation {
  ErrorKind kind;
  std::optional<std::size_t> outcome;
  double residual;
  std::string message;
};

template <class Real>
std::vector<Violation> check(const Povm<Real>& p, const Tolerances& tol = {}) {
  std::vector<Violation> out;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const auto& e = p[j];
    const Real scale = std::max(Real(1), e.cwiseAbs().maxCoeff());
    const Real defect = detail::hermitian_defect(e);
    if (!(defect <= Real(tol.herm_tol) * scale)) {
      out.push_back({ErrorKind::NotHermitian, j, static_cast<double>(defect),
                     "effect " + std::to_string(j) + " is not Hermitian"});
      continue;
    }
    const CMatrix<Real> h = (e + e.adjoint()) * Real(0.5);
    const RVector<Real> ev = detail::eigenvalues_descending<Real>(h);
    if (ev.minCoeff() < -Real(tol.psd_tol)) {
      out.push_back({ErrorKind::NotPSD, j, static_cast<double>(ev.minCoeff()),
                     "effect " + std::to_string(j) + " has a negative eigenvalue"});
    }
    if (ev.maxCoeff() > Real(1) + Real(tol.psd_tol)) {
      out.push_back({ErrorKind::NotPSD, j, static_cast<double>(ev.maxCoeff()),
                     "effect " + std::to_string(j) + " exceeds the identity"});
    }
  }
  const Real residual = (p.sum() - CMatrix<Real>::Identity(p.dim(), p.dim())).norm();
  if (!(residual <= Real(tol.recon_tol))) {
    out.push_back({ErrorKind::NotNormalized, std::nullopt, static_cast<double>(residual),
                   "effects do not sum to the identity"});
  }
  return out;
}

/// Returns the POVM unchanged when every invariant holds; otherwise throws
/// the first violation.
template <class Real>
const Povm<Real>& validate(const Povm<Real>& p, const Tolerances& tol = {}) {
  const auto violations = check(p, tol);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(v.kind, v.message, v.outcome, v.residual);
  }
  return p;
}

template <class Real>
bool is_zero_effect(const CMatrix<Real>& e, const Tolerances& tol = {}) {
  return e.norm() <= Real(tol.zero_effect_tol);
}

template <class Real>
std::size_t nonzero_count(const Povm<Real>& p, const Tolerances& tol = {}) {
  return static_cast<std::size_t>(std::count_if(
      p.begin(), p.end(), [&](const CMatrix<Real>& e) { return !is_zero_effect(e, tol); }));
}

template <class Real>
struct Pruned {
  Povm<Real> povm;
  /// Maps each surviving outcome back to its position in the source.
  RelabelMap map;
};

template <class Real>
Pruned<Real> prune_zero_effects(const Povm<Real>& p, const Tolerances& tol = {}) {
  std::vector<CMatrix<Real>> kept;
  std::vector<std::size_t> where;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!is_zero_effect(p[j], tol)) {
      kept.push_back(p[j]);
      where.push_back(j);
    }
  }
  if (kept.empty()) throw Error(ErrorKind::AllZero, "every effect is zero");
  return {Povm<Real>(p.dim(), std::move(kept)), RelabelMap(std::move(where), p.size())};
}

/// result[j] = sum of p[k] over k with f(k) = j.
template <class Real>
Povm<Real> relabel(const Povm<Real>& p, const RelabelMap& f) {
  if (f.source_size() != p.size()) {
    throw Error(ErrorKind::MapSizeMismatch, "relabel map size differs from outcome count");
  }
  if (f.target_size() == 0) throw Error(ErrorKind::EmptyInput, "empty target outcome set");
  std::vector<CMatrix<Real>> out(f.target_size(), CMatrix<Real>::Zero(p.dim(), p.dim()));
  for (std::size_t k = 0; k < p.size(); ++k) out[f(k)] += p[k];
  return Povm<Real>(p.dim(), std::move(out));
}

/// Appends zero effects on the right up to `n` outcomes.
template <class Real>
Povm<Real> pad_zeros(const Povm<Real>& p, std::size_t n) {
  std::vector<CMatrix<Real>> out = p.effects();
  while (out.size() < n) out.push_back(CMatrix<Real>::Zero(p.dim(), p.dim()));
  return Povm<Real>(p.dim(), std::move(out));
}

/// t * b + (1 - t) * c, effect by effect, after right zero-padding.
template <class Real>
Povm<Real> mix(const Povm<Real>& b, const Povm<Real>& c, Real t) {
  if (!(t > Real(0) && t < Real(1))) {
    throw Error(ErrorKind::BadWeight, "mixing weight must lie in (0, 1)", std::nullopt,
                static_cast<double>(t));
  }
  if (b.dim() != c.dim()) throw Error(ErrorKind::DimensionMismatch, "mixing different dimensions");
  const std::size_t n = std::max(b.size(), c.size());
  const Povm<Real> bp = pad_zeros(b, n);
  const Povm<Real> cp = pad_zeros(c, n);
  std::vector<CMatrix<Real>> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.push_back(t * bp[j] + (Real(1) - t) * cp[j]);
  return Povm<Real>(b.dim(), std::move(out));
}

template <class Real>
struct SpectralRelabeling {
  Povm<Real> rank1;
  /// Sends each rank-1 outcome (j, k) to its source outcome j.
  RelabelMap map;
};

/// Splits every nonzero effect into its spectral terms lambda_k P_k, in
/// (outcome, descending eigenvalue) order. Effects that are already rank-1
/// are kept verbatim; zero effects and eigenvalues below the rank cutoff
/// are dropped. The map targets the outcomes of `p` itself, so
/// relabel(rank1, map) reproduces p including its zero effects.
template <class Real>
SpectralRelabeling<Real> spectral_relabel(const Povm<Real>& p, const Tolerances& tol = {}) {
  validate(p, tol);
  std::vector<CMatrix<Real>> terms;
  std::vector<std::size_t> source;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (is_zero_effect(p[j], tol)) continue;
    const auto spec = eig_herm(p[j], tol);
    const Real cutoff = detail::rank_cutoff(spec.eigenvalues, tol);
    const Index rank = static_cast<Index>((spec.eigenvalues.array().abs() > cutoff).count());
    if (rank <= 1) {
      terms.push_back(p[j]);
      source.push_back(j);
      continue;
    }
    for (Index k = 0; k < spec.size(); ++k) {
      if (spec.eigenvalues(k) <= cutoff) continue;
      terms.push_back(spec.eigenvalues(k) * spec.projection(k));
      source.push_back(j);
    }
  }
  return {Povm<Real>(p.dim(), std::move(terms)), RelabelMap(std::move(source), p.size())};
}

template <class Real>
bool is_projection(const CMatrix<Real>& e, const Tolerances& tol = {}) {
  return (e * e - e).norm() <= Real(tol.recon_tol);
}

enum class Matching { Ordered, Permutation };

/// Equality up to zero effects. `Matching::Permutation` additionally allows
/// the surviving outcomes to be reordered, matched greedily by Frobenius
/// distance.
template <class Real>
bool equivalent(const Povm<Real>& a, const Povm<Real>& b, const Tolerances& tol = {},
                Matching matching = Matching::Ordered) {
  if (a.dim() != b.dim()) return false;
  const auto pa = prune_zero_effects(a, tol).povm;
  const auto pb = prune_zero_effects(b, tol).povm;
  if (pa.size() != pb.size()) return false;
  const Real bound = Real(tol.recon_tol);
  if (matching == Matching::Ordered) {
    for (std::size_t j = 0; j < pa.size(); ++j) {
      if ((pa[j] - pb[j]).norm() > bound) return false;
    }
    return true;
  }
  std::vector<bool> used(pb.size(), false);
  for (std::size_t j = 0; j < pa.size(); ++j) {
    std::size_t best = pb.size();
    Real best_dist = std::numeric_limits<Real>::infinity();
    for (std::size_t k = 0; k < pb.size(); ++k) {
      if (used[k]) continue;
      const Real dist = (pa[j] - pb[k]).norm();
      if (dist < best_dist) {
        best_dist = dist;
        best = k;
      }
    }
    if (best == pb.size() || best_dist > bound) return false;
    used[best] = true;
  }
  return true;
}

}  // namespace povm
