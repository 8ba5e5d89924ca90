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
#include <map>
#include <string>
#include <vector>

#include "povm/extremality.hpp"
#include "povm/random.hpp"

namespace povm {

template <class Real>
struct Component {
  Real weight = 0;
  Povm<Real> extremal;
  RelabelMap relabel;
};

/// Bookkeeping from `decompose`; not part of the certificate document.
struct DecompositionTrace {
  std::size_t rank1_outcomes = 0;
  std::size_t splits = 0;
  std::size_t max_depth = 0;
  std::size_t leaves = 0;
  std::size_t merged = 0;
  std::size_t dropped_components = 0;
  double dropped_weight = 0;
};

/// target = sum_i weight_i * relabel(extremal_i, relabel_i), with every
/// extremal_i an extremal rank-1 POVM.
template <class Real>
struct DecompositionCertificate {
  Povm<Real> target;
  std::vector<Component<Real>> components;
  DecompositionTrace trace;
};

/// Components whose merged weight falls below this are discarded.
inline constexpr double kMinComponentWeight = 1e-12;

/// Writes p as a mixture of relabeled extremal rank-1 POVMs.
///
/// p is first refined to a rank-1 POVM B by spectral relabeling. While the
/// effects of a node are linearly dependent, the node is split along the
/// dependence (the direction of smallest singular value); each split removes
/// at least one effect from both children. Independent nodes are the leaves.
/// Leaves with the same surviving effect set are the same POVM, so they
/// are merged by summing weights.
template <class Real>
DecompositionCertificate<Real> decompose(const Povm<Real>& p, const Tolerances& tol = {}) {
  validate(p, tol);
  const auto refined = spectral_relabel(p, tol);
  const std::size_t m = refined.rank1.size();
  const std::size_t d = static_cast<std::size_t>(p.dim());
  const std::size_t depth_limit = (m > d ? m - d : 0) + 1;

  struct Node {
    Povm<Real> povm;
    std::vector<std::size_t> origin;  // indices into refined.rank1
    Real weight;
    std::size_t depth;
  };

  DecompositionCertificate<Real> cert;
  cert.target = p;
  cert.trace.rank1_outcomes = m;

  std::vector<std::size_t> all(m);
  for (std::size_t k = 0; k < m; ++k) all[k] = k;
  std::vector<Node> stack;
  stack.push_back({refined.rank1, all, Real(1), 0});

  std::map<std::vector<std::size_t>, std::size_t> seen;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.depth > depth_limit) {
      throw Error(ErrorKind::NonConvergence, "split recursion exceeded its depth bound",
                  std::nullopt, static_cast<double>(node.depth));
    }
    cert.trace.max_depth = std::max(cert.trace.max_depth, node.depth);

    const auto ind = linearly_independent(node.povm.effects(), tol);
    if (ind.independent) {
      ++cert.trace.leaves;
      auto it = seen.find(node.origin);
      if (it != seen.end()) {
        auto& existing = cert.components[it->second];
        bool same = true;
        for (std::size_t k = 0; k < node.povm.size() && same; ++k) {
          same = (existing.extremal[k] - node.povm[k]).norm() <= Real(tol.recon_tol);
        }
        if (same) {
          existing.weight += node.weight;
          ++cert.trace.merged;
          continue;
        }
      }
      std::vector<std::size_t> targets(node.origin.size());
      for (std::size_t k = 0; k < targets.size(); ++k) targets[k] = refined.map(node.origin[k]);
      seen.emplace(node.origin, cert.components.size());
      cert.components.push_back(
          {node.weight, std::move(node.povm), RelabelMap(std::move(targets), p.size())});
      continue;
    }

    const auto split = split_mixture(node.povm, ind.real_dependence(), tol);
    ++cert.trace.splits;
    auto child = [&](const Povm<Real>& half, Real w) {
      const auto pruned = prune_zero_effects(half, tol);
      std::vector<std::size_t> origin(pruned.map.source_size());
      for (std::size_t k = 0; k < origin.size(); ++k) origin[k] = node.origin[pruned.map(k)];
      return Node{pruned.povm, std::move(origin), node.weight * w, node.depth + 1};
    };
    // Right first so that the left branch is expanded first.
    stack.push_back(child(split.right, Real(1) - split.weight));
    stack.push_back(child(split.left, split.weight));
  }

  Real kept = 0;
  Real dropped = 0;
  std::vector<Component<Real>> survivors;
  for (auto& c : cert.components) {
    if (c.weight < Real(kMinComponentWeight)) {
      dropped += c.weight;
      ++cert.trace.dropped_components;
    } else {
      kept += c.weight;
      survivors.push_back(std::move(c));
    }
  }
  for (auto& c : survivors) c.weight /= kept;
  cert.components = std::move(survivors);
  cert.trace.dropped_weight = static_cast<double>(dropped);
  return cert;
}

/// Refines an extremal POVM to the extremal rank-1 POVM it relabels.
template <class Real>
SpectralRelabeling<Real> extremal_to_rank1(const Povm<Real>& p, const Tolerances& tol = {}) {
  if (!is_extremal(p, tol)) throw Error(ErrorKind::NotExtremal, "input POVM is not extremal");
  auto out = spectral_relabel(p, tol);
  if (!is_extremal_rank1(out.rank1, tol)) {
    throw Error(ErrorKind::InternalContradiction,
                "rank-1 refinement of an extremal POVM is not extremal");
  }
  return out;
}

template <class Real>
struct CertificateReport {
  bool passed = false;
  /// Frobenius residual of the reconstruction, per target outcome.
  std::vector<Real> effect_residuals;
  std::vector<bool> component_extremal;
  Real weight_sum_residual = 0;
  Real max_residual = 0;
  std::vector<std::string> failures;
};

template <class Real>
CertificateReport<Real> verify_certificate(const DecompositionCertificate<Real>& c,
                                           const Tolerances& tol = {}) {
  CertificateReport<Real> r;
  const auto& target = c.target;
  const Index d = target.dim();
  std::vector<CMatrix<Real>> recon(target.size(), CMatrix<Real>::Zero(d, d));
  Real weight_sum = 0;
  if (c.components.empty()) r.failures.push_back("certificate has no components");

  for (std::size_t i = 0; i < c.components.size(); ++i) {
    const auto& comp = c.components[i];
    const std::string tag = "component " + std::to_string(i);
    weight_sum += comp.weight;
    if (!(comp.weight > Real(0))) r.failures.push_back(tag + ": weight is not positive");

    bool extremal = false;
    try {
      extremal = comp.extremal.dim() == d && is_extremal_rank1(comp.extremal, tol);
    } catch (const Error& e) {
      r.failures.push_back(tag + ": " + e.what());
    }
    r.component_extremal.push_back(extremal);
    if (!extremal) r.failures.push_back(tag + ": not an extremal rank-1 POVM");

    if (comp.relabel.source_size() != comp.extremal.size() ||
        comp.relabel.target_size() != target.size() || comp.extremal.dim() != d) {
      r.failures.push_back(tag + ": relabel map does not fit");
      continue;
    }
    const auto pushed = relabel(comp.extremal, comp.relabel);
    for (std::size_t j = 0; j < target.size(); ++j) recon[j] += comp.weight * pushed[j];
  }

  r.weight_sum_residual = std::abs(weight_sum - Real(1));
  if (r.weight_sum_residual > Real(tol.recon_tol)) r.failures.push_back("weights do not sum to 1");
  for (std::size_t j = 0; j < target.size(); ++j) {
    const Real res = (recon[j] - target[j]).norm();
    r.effect_residuals.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  if (r.max_residual > Real(tol.recon_tol)) {
    r.failures.push_back("reconstruction residual exceeds tolerance");
  }
  r.passed = r.failures.empty();
  return r;
}

/// Unit-trace positive semidefinite operator.
template <class Real>
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix<Real> m, const Tolerances& tol = {}) : m_(std::move(m)) {
    if (!is_psd(m_, tol)) throw Error(ErrorKind::NotPSD, "density matrix is not positive");
    const Real tr = std::real(m_.trace());
    if (std::abs(tr - Real(1)) > Real(tol.recon_tol)) {
      throw Error(ErrorKind::NotNormalized, "density matrix trace is not 1", std::nullopt,
                  static_cast<double>(tr));
    }
  }

  const CMatrix<Real>& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  CMatrix<Real> m_;
};

/// rho = G G^dagger / tr(G G^dagger) with a complex Ginibre G.
template <class Real>
DensityMatrix<Real> random_density(Index d, Rng& rng) {
  const CMatrix<Real> g = complex_gaussian<Real>(d, d, rng);
  CMatrix<Real> rho = g * g.adjoint();
  rho /= std::real(rho.trace());
  rho = (rho + rho.adjoint()).eval() * Real(0.5);
  return DensityMatrix<Real>(std::move(rho));
}

/// Born rule: q_j = tr(rho p[j]).
template <class Real>
RVector<Real> outcome_probabilities(const Povm<Real>& p, const DensityMatrix<Real>& rho) {
  if (rho.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "state and POVM dimensions differ");
  RVector<Real> q(static_cast<Index>(p.size()));
  for (std::size_t j = 0; j < p.size(); ++j) {
    q(static_cast<Index>(j)) = std::real(rho.matrix().cwiseProduct(p[j].transpose()).sum());
  }
  return q;
}

template <class Real>
struct StatisticsReport {
  bool passed = false;
  /// Max |q_target - q_mixture| per sampled state.
  std::vector<Real> deviations;
  Real max_deviation = 0;
};

/// Compares the target's outcome statistics with those of the randomized,
/// relabeled components on `trials` seeded random states.
template <class Real>
StatisticsReport<Real> statistics_equivalence(const DecompositionCertificate<Real>& c,
                                              std::size_t trials, std::uint64_t seed,
                                              const Tolerances& tol = {}) {
  StatisticsReport<Real> r;
  Rng rng(seed);
  const std::size_t n = c.target.size();
  for (std::size_t t = 0; t < trials; ++t) {
    const auto rho = random_density<Real>(c.target.dim(), rng);
    const RVector<Real> direct = outcome_probabilities(c.target, rho);
    RVector<Real> mixed = RVector<Real>::Zero(static_cast<Index>(n));
    bool fits = true;
    for (const auto& comp : c.components) {
      if (comp.relabel.source_size() != comp.extremal.size() || comp.relabel.target_size() != n ||
          comp.extremal.dim() != c.target.dim()) {
        fits = false;
        break;
      }
      const RVector<Real> q = outcome_probabilities(comp.extremal, rho);
      for (std::size_t k = 0; k < comp.extremal.size(); ++k) {
        mixed(static_cast<Index>(comp.relabel(k))) += comp.weight * q(static_cast<Index>(k));
      }
    }
    const Real dev = fits ? (direct - mixed).cwiseAbs().maxCoeff()
                          : std::numeric_limits<Real>::infinity();
    r.deviations.push_back(dev);
    r.max_deviation = std::max(r.max_deviation, dev);
  }
  r.passed = r.max_deviation <= Real(tol.recon_tol);
  return r;
}

}  // namespace povm
