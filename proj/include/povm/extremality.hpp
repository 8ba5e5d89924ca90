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

#include <vector>

#include "povm/povm.hpp"

namespace povm {

/// Each effect written as sum_k |psi_k><psi_k| with nonzero, mutually
/// orthogonal vectors. Eigenvalues are absorbed into the vector norms.
template <class Real>
struct SpectralForm {
  Index dim = 0;
  std::vector<std::vector<CVector<Real>>> vectors;

  std::size_t size() const { return vectors.size(); }
  Index multiplicity(std::size_t j) const { return static_cast<Index>(vectors[j].size()); }

  CMatrix<Real> effect(std::size_t j) const {
    CMatrix<Real> e = CMatrix<Real>::Zero(dim, dim);
    for (const auto& v : vectors[j]) e += v * v.adjoint();
    return e;
  }

  /// Column k of the returned matrix is psi_k(j).
  CMatrix<Real> frame(std::size_t j) const {
    CMatrix<Real> f(dim, multiplicity(j));
    for (Index k = 0; k < multiplicity(j); ++k) f.col(k) = vectors[j][static_cast<std::size_t>(k)];
    return f;
  }

  /// |psi_k(j)><psi_l(j)| for every j and k, l, ordered by (j, k, l).
  std::vector<CMatrix<Real>> cross_operators() const {
    std::vector<CMatrix<Real>> ops;
    for (const auto& vs : vectors) {
      for (const auto& a : vs) {
        for (const auto& b : vs) ops.push_back(a * b.adjoint());
      }
    }
    return ops;
  }
};

/// Requires zero effects to be pruned already.
template <class Real>
SpectralForm<Real> spectral_form(const Povm<Real>& p, const Tolerances& tol = {}) {
  SpectralForm<Real> out;
  out.dim = p.dim();
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (is_zero_effect(p[j], tol)) {
      throw Error(ErrorKind::ZeroEffect, "spectral form needs pruned effects", j);
    }
    const auto spec = eig_herm(p[j], tol);
    const Real cutoff = detail::rank_cutoff(spec.eigenvalues, tol);
    std::vector<CVector<Real>> vs;
    for (Index k = 0; k < spec.size(); ++k) {
      // The top term is kept even below the cutoff so that n(j) >= 1.
      if (spec.eigenvalues(k) <= cutoff && k > 0) break;
      const Real amp = std::sqrt(std::max(spec.eigenvalues(k), Real(0)));
      vs.push_back(amp * spec.eigenvectors.col(k));
    }
    out.vectors.push_back(std::move(vs));
  }
  return out;
}

template <class Real>
struct ExtremalityReport {
  bool extremal = false;
  /// Independence held only narrowly; the verdict is then non-extremal.
  bool borderline = false;
  std::size_t nonzero_count = 0;
  std::size_t operator_count = 0;
  Real relative_gap = 0;
};

/// General criterion: the POVM is extremal iff the operators
/// |psi_k(j)><psi_l(j)| of its spectral form are linearly independent.
template <class Real>
ExtremalityReport<Real> extremality(const Povm<Real>& p, const Tolerances& tol = {}) {
  validate(p, tol);
  const auto pruned = prune_zero_effects(p, tol).povm;
  const auto form = spectral_form(pruned, tol);
  const auto ops = form.cross_operators();
  const auto ind = linearly_independent(ops, tol);
  ExtremalityReport<Real> r;
  r.nonzero_count = pruned.size();
  r.operator_count = ops.size();
  r.relative_gap = ind.relative_gap;
  r.borderline = ind.borderline;
  r.extremal = ind.independent && !ind.borderline;
  return r;
}

template <class Real>
bool is_extremal(const Povm<Real>& p, const Tolerances& tol = {}) {
  return extremality(p, tol).extremal;
}

template <class Real>
bool is_rank1(const Povm<Real>& p, const Tolerances& tol = {}) {
  return std::all_of(p.begin(), p.end(), [&](const CMatrix<Real>& e) {
    return is_zero_effect(e, tol) || rank_of(e, tol) <= 1;
  });
}

/// For rank-1 POVMs extremality reduces to independence of the effects.
template <class Real>
bool is_extremal_rank1(const Povm<Real>& p, const Tolerances& tol = {}) {
  validate(p, tol);
  if (!is_rank1(p, tol)) throw Error(ErrorKind::NotRank1, "POVM has an effect of rank > 1");
  const auto pruned = prune_zero_effects(p, tol).povm;
  const auto ind = linearly_independent(pruned.effects(), tol);
  return ind.independent && !ind.borderline;
}

enum class SplitRoute {
  /// Real dependence among the effects themselves.
  EffectDependence,
  /// Dependence among the spectral cross operators; used when the effects
  /// are independent but the POVM is still not extremal.
  CrossOperatorPerturbation,
};

/// source[j] = weight * left[j] + (1 - weight) * right[j].
template <class Real>
struct MixtureSplit {
  Povm<Real> left;
  Povm<Real> right;
  Real weight = 0;
  /// Unit-norm effect dependence; empty for the perturbation route.
  RVector<Real> dependence;
  SplitRoute route = SplitRoute::EffectDependence;
};

/// Splits p along a real dependence sum_j lambda_j p[j] = 0. With i+ / i-
/// the (lowest-index) argmax / argmin of lambda:
///   left[j]  = (1 - lambda_j / lambda_{i+}) p[j],
///   right[j] = (1 - lambda_j / lambda_{i-}) p[j],
///   weight   = lambda_{i+} / (lambda_{i+} - lambda_{i-}).
template <class Real>
MixtureSplit<Real> split_mixture(const Povm<Real>& p, const RVector<Real>& lambda,
                                 const Tolerances& tol = {}) {
  if (static_cast<std::size_t>(lambda.size()) != p.size()) {
    throw Error(ErrorKind::DimensionMismatch, "dependence length differs from outcome count");
  }
  const Real norm = lambda.norm();
  if (!(norm > Real(0))) throw Error(ErrorKind::DegenerateDependence, "dependence is zero");
  const RVector<Real> l = lambda / norm;

  Real scale = 0;
  CMatrix<Real> combo = CMatrix<Real>::Zero(p.dim(), p.dim());
  for (std::size_t j = 0; j < p.size(); ++j) {
    combo += l(static_cast<Index>(j)) * p[j];
    scale = std::max(scale, p[j].norm());
  }
  const Real residual = combo.norm();
  if (!(residual <= Real(tol.recon_tol) * scale)) {
    throw Error(ErrorKind::NotADependence, "coefficients do not annihilate the effects",
                std::nullopt, static_cast<double>(residual));
  }

  Index hi = 0;
  Index lo = 0;
  for (Index j = 1; j < l.size(); ++j) {
    if (l(j) > l(hi)) hi = j;
    if (l(j) < l(lo)) lo = j;
  }
  if (!(l(hi) > Real(0)) || !(l(lo) < Real(0))) {
    throw Error(ErrorKind::DegenerateDependence, "dependence lacks mixed signs");
  }

  std::vector<CMatrix<Real>> left;
  std::vector<CMatrix<Real>> right;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const Index i = static_cast<Index>(j);
    left.push_back(i == hi ? CMatrix<Real>::Zero(p.dim(), p.dim()).eval()
                           : ((Real(1) - l(i) / l(hi)) * p[j]).eval());
    right.push_back(i == lo ? CMatrix<Real>::Zero(p.dim(), p.dim()).eval()
                            : ((Real(1) - l(i) / l(lo)) * p[j]).eval());
  }
  MixtureSplit<Real> out;
  out.left = Povm<Real>(p.dim(), std::move(left));
  out.right = Povm<Real>(p.dim(), std::move(right));
  out.weight = l(hi) / (l(hi) - l(lo));
  out.dependence = l;
  out.route = SplitRoute::EffectDependence;
  return out;
}

/// Real dependence among the nonzero effects of p, if any.
template <class Real>
std::optional<RVector<Real>> effect_dependence(const Povm<Real>& p, const Tolerances& tol = {}) {
  const auto ind = linearly_independent(p.effects(), tol);
  if (ind.independent) return std::nullopt;
  return ind.real_dependence();
}

namespace detail {

// A = 1/2 (A + eps D) + 1/2 (A - eps D) with D_j = Psi_j H_j Psi_j^dagger
// built from a cross-operator dependence; sum_j D_j = 0 and
// eps = 1 / max_j ||H_j||_2 keeps both halves positive.
template <class Real>
std::optional<MixtureSplit<Real>> perturbation_split(const Povm<Real>& p,
                                                     const Tolerances& tol) {
  const auto form = spectral_form(p, tol);
  const auto ops = form.cross_operators();
  const auto ind = linearly_independent(ops, tol);
  if (ind.independent && !ind.borderline) return std::nullopt;
  if (!ind.dependence) return std::nullopt;
  const CVector<Real>& c = *ind.dependence;

  std::vector<CMatrix<Real>> herm_part;
  std::vector<CMatrix<Real>> anti_part;
  Real herm_norm = 0;
  Real anti_norm = 0;
  Index offset = 0;
  for (std::size_t j = 0; j < form.size(); ++j) {
    const Index n = form.multiplicity(j);
    CMatrix<Real> cj(n, n);
    for (Index k = 0; k < n; ++k) {
      for (Index l = 0; l < n; ++l) cj(k, l) = c(offset + k * n + l);
    }
    offset += n * n;
    herm_part.push_back((cj + cj.adjoint()) * Real(0.5));
    anti_part.push_back((cj - cj.adjoint()) * Complex<Real>(0, -0.5));
    herm_norm += herm_part.back().squaredNorm();
    anti_norm += anti_part.back().squaredNorm();
  }
  const auto& h = herm_norm >= anti_norm ? herm_part : anti_part;

  Real spectral = 0;
  std::vector<CMatrix<Real>> deltas;
  for (std::size_t j = 0; j < form.size(); ++j) {
    const RVector<Real> ev = eigenvalues_descending<Real>(h[j]);
    spectral = std::max(spectral, ev.cwiseAbs().maxCoeff());
    const CMatrix<Real> f = form.frame(j);
    deltas.push_back(f * h[j] * f.adjoint());
  }
  if (!(spectral > Real(0))) return std::nullopt;
  const Real eps = Real(1) / spectral;

  std::vector<CMatrix<Real>> left;
  std::vector<CMatrix<Real>> right;
  for (std::size_t j = 0; j < p.size(); ++j) {
    left.push_back(p[j] + eps * deltas[j]);
    right.push_back(p[j] - eps * deltas[j]);
  }
  MixtureSplit<Real> out;
  out.left = Povm<Real>(p.dim(), std::move(left));
  out.right = Povm<Real>(p.dim(), std::move(right));
  out.weight = Real(0.5);
  out.route = SplitRoute::CrossOperatorPerturbation;
  return out;
}

}  // namespace detail

/// Writes a non-extremal POVM as a mixture of two distinct POVMs. Effect
/// dependences are split with the closed-form weights above; otherwise the
/// split follows a dependence among the spectral cross operators. Zero
/// effects of p are carried through unchanged. Returns nullopt when p is
/// extremal.
template <class Real>
std::optional<MixtureSplit<Real>> split_mixture(const Povm<Real>& p, const Tolerances& tol = {}) {
  validate(p, tol);
  const auto pruned = prune_zero_effects(p, tol);
  std::optional<MixtureSplit<Real>> split;
  if (auto lambda = effect_dependence(pruned.povm, tol)) {
    split = split_mixture(pruned.povm, *lambda, tol);
  } else {
    split = detail::perturbation_split(pruned.povm, tol);
  }
  if (!split) return std::nullopt;
  if (pruned.povm.size() != p.size()) {
    split->left = relabel(split->left, pruned.map);
    split->right = relabel(split->right, pruned.map);
    if (split->dependence.size() > 0) {
      RVector<Real> full = RVector<Real>::Zero(static_cast<Index>(p.size()));
      for (std::size_t k = 0; k < pruned.map.source_size(); ++k) {
        full(static_cast<Index>(pruned.map(k))) = split->dependence(static_cast<Index>(k));
      }
      split->dependence = full;
    }
  }
  return split;
}

template <class Real>
struct SplitCheck {
  bool passed = false;
  Real reconstruction_residual = 0;
  Real separation = 0;
  std::vector<Violation> left_violations;
  std::vector<Violation> right_violations;
};

/// Checks that both halves are valid POVMs, that they differ, and that
/// mixing them at the split weight reproduces the source.
template <class Real>
SplitCheck<Real> verify_split(const Povm<Real>& source, const MixtureSplit<Real>& split,
                              const Tolerances& tol = {}) {
  SplitCheck<Real> out;
  out.left_violations = check(split.left, tol);
  out.right_violations = check(split.right, tol);
  if (split.left.size() != source.size() || split.right.size() != source.size()) {
    out.reconstruction_residual = std::numeric_limits<Real>::infinity();
    return out;
  }
  for (std::size_t j = 0; j < source.size(); ++j) {
    const CMatrix<Real> recon =
        split.weight * split.left[j] + (Real(1) - split.weight) * split.right[j];
    out.reconstruction_residual = std::max(out.reconstruction_residual, (recon - source[j]).norm());
    out.separation = std::max(out.separation, (split.left[j] - split.right[j]).norm());
  }
  out.passed = out.left_violations.empty() && out.right_violations.empty() &&
               out.reconstruction_residual <= Real(tol.recon_tol) &&
               out.separation > Real(tol.recon_tol) && split.weight > Real(0) &&
               split.weight < Real(1);
  return out;
}

}  // namespace povm
