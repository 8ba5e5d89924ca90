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

#include "povm/povm.hpp"

#include <gtest/gtest.h>

#include "povm/classify.hpp"
#include "support/fixtures.hpp"

using namespace povm;
using namespace povm::testing;

namespace {

const Tolerances kTol;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no povm::Error thrown";
  return ErrorKind::Io;
}

TEST(Validate, Examples) {
  EXPECT_NO_THROW(validate(half_half()));
  EXPECT_EQ(kind_of([] { validate(Povm<double>({identity(2), identity(2)})); }),
            ErrorKind::NotNormalized);
  EXPECT_NO_THROW(validate(qubit_example()));
}

TEST(Validate, ReportsResidualAndOutcome) {
  const auto v = check(Povm<double>({identity(2), identity(2)}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NEAR(v[0].residual, std::sqrt(2.0), 1e-14);

  M neg = ket_bra(2, 0, 0) * -0.5;
  const auto w = check(Povm<double>({neg, identity(2) - neg}));
  ASSERT_FALSE(w.empty());
  EXPECT_EQ(w[0].kind, ErrorKind::NotPSD);
  EXPECT_EQ(w[0].outcome, std::optional<std::size_t>(0));

  EXPECT_EQ(kind_of([] { validate(Povm<double>({ket_bra(2, 0, 1), identity(2)})); }),
            ErrorKind::NotHermitian);
}

TEST(Validate, ShapeErrors) {
  EXPECT_EQ(kind_of([] { Povm<double>({identity(2), identity(3)}); }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { Povm<double>(std::vector<M>{}); }), ErrorKind::EmptyInput);
}

TEST(Prune, DropsZeroEffects) {
  const auto r = prune_zero_effects(Povm<double>({identity(2), M::Zero(2, 2)}));
  ASSERT_EQ(r.povm.size(), 1u);
  EXPECT_EQ(r.map.indices(), std::vector<std::size_t>{0});
  EXPECT_EQ(r.map.target_size(), 2u);
  EXPECT_EQ(r.povm[0], identity(2));
}

TEST(Prune, NoZerosGivesIdentityMap) {
  const auto p = four_outcome_qubit();
  const auto r = prune_zero_effects(p);
  EXPECT_EQ(r.map, RelabelMap::identity(4));
  EXPECT_EQ(max_effect_distance(r.povm, p), 0.0);
  // Relabeling through the map restores the source.
  EXPECT_TRUE(equivalent(relabel(r.povm, r.map), p));
}

TEST(Prune, AllZeroIsRejected) {
  EXPECT_EQ(kind_of([] { prune_zero_effects(Povm<double>({M::Zero(2, 2)})); }),
            ErrorKind::AllZero);
}

TEST(Relabel, Examples) {
  const auto p = four_outcome_qubit();
  EXPECT_EQ(max_effect_distance(relabel(p, RelabelMap::identity(4)), p), 0.0);

  const auto merged = relabel(p, RelabelMap({0, 0, 0, 0}, 1));
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_LT((merged[0] - identity(2)).norm(), 1e-15);

  const Povm<double> three = qubit_example();
  const auto two = relabel(three, RelabelMap({0, 0, 1}, 2));
  EXPECT_EQ(two[0], three[0] + three[1]);
  EXPECT_EQ(two[1], three[2]);
}

TEST(Relabel, Errors) {
  EXPECT_EQ(kind_of([] { relabel(half_half(), RelabelMap({0, 0, 0}, 1)); }),
            ErrorKind::MapSizeMismatch);
  EXPECT_EQ(kind_of([] { RelabelMap({0, 2}, 2); }), ErrorKind::OutOfRange);
}

TEST(Relabel, CompositionProperty) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto p = random_povm<double>(2 + trial % 3, static_cast<Index>(n), trial);
    const std::size_t m = 1 + rng() % n;
    const std::size_t k = 1 + rng() % m;
    std::vector<std::size_t> fv(n), gv(m);
    for (auto& x : fv) x = rng() % m;
    for (auto& x : gv) x = rng() % k;
    const RelabelMap f(fv, m), g(gv, k);
    const auto lhs = relabel(relabel(p, f), g);
    const auto rhs = relabel(p, compose(g, f));
    ASSERT_LE(max_effect_distance(lhs, rhs), kTol.recon_tol);
    ASSERT_LE((lhs.sum() - p.sum()).norm(), 1e-14);
  }
}

TEST(Mix, Idempotent) {
  const auto p = qubit_example();
  EXPECT_LE(max_effect_distance(mix(p, p, 0.5), p), 1e-16);
}

TEST(Mix, PauliBasesAtOneHalf) {
  const Povm<double> z({(identity(2) + sigma_z()) / 2.0, (identity(2) - sigma_z()) / 2.0});
  const Povm<double> x({(identity(2) + sigma_x()) / 2.0, (identity(2) - sigma_x()) / 2.0});
  const auto m = mix(z, x, 0.5);
  // Hand arithmetic: (I+sz)/4 + (I+sx)/4 and (I-sz)/4 + (I-sx)/4.
  M e0(2, 2), e1(2, 2);
  e0 << 0.75, 0.25, 0.25, 0.25;
  e1 << 0.25, -0.25, -0.25, 0.75;
  EXPECT_LT((m[0] - e0).norm(), 1e-15);
  EXPECT_LT((m[1] - e1).norm(), 1e-15);
  EXPECT_NO_THROW(validate(m));
}

TEST(Mix, PadsShorterOperandOnTheRight) {
  const auto m = mix(onb_pvm(2), Povm<double>({identity(2)}), 0.25);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_LT((m[0] - (0.25 * ket_bra(2, 0, 0) + 0.75 * identity(2))).norm(), 1e-15);
  EXPECT_LT((m[1] - 0.25 * ket_bra(2, 1, 1)).norm(), 1e-15);
  EXPECT_NO_THROW(validate(m));
}

TEST(Mix, Errors) {
  for (double t : {0.0, 1.0, -0.5, 2.0}) {
    EXPECT_EQ(kind_of([t] { mix(half_half(), half_half(), t); }), ErrorKind::BadWeight);
  }
  EXPECT_EQ(kind_of([] { mix(half_half(), onb_pvm(3), 0.5); }), ErrorKind::DimensionMismatch);
}

TEST(Mix, SymmetricAndAffine) {
  for (int trial = 0; trial < 100; ++trial) {
    const auto b = random_povm<double>(3, 2 + trial % 4, 1000 + trial);
    const auto c = random_povm<double>(3, 2 + (trial / 4) % 4, 2000 + trial);
    const double t = 0.05 + 0.9 * (trial % 10) / 10.0;
    const auto l = mix(b, c, t);
    const auto r = mix(c, b, 1 - t);
    ASSERT_LE(max_effect_distance(l, r), 1e-15);
    ASSERT_NO_THROW(validate(l));
  }
}

TEST(SpectralRelabel, RankOneInputIsFixed) {
  const auto p = qubit_example();
  const auto r = spectral_relabel(p);
  EXPECT_EQ(r.map, RelabelMap::identity(3));
  EXPECT_EQ(max_effect_distance(r.rank1, p), 0.0);
}

TEST(SpectralRelabel, IdentityBecomesBasisPvm) {
  const auto r = spectral_relabel(Povm<double>({identity(3)}));
  ASSERT_EQ(r.rank1.size(), 3u);
  EXPECT_EQ(r.map.indices(), (std::vector<std::size_t>{0, 0, 0}));
  const auto c = classify(r.rank1);
  EXPECT_TRUE(c.is_pvm);
  EXPECT_TRUE(c.is_rank1);
}

TEST(SpectralRelabel, TypeDGivesSixRankOneEffects) {
  const auto p = type_d_example();
  const auto r = spectral_relabel(p);
  ASSERT_EQ(r.rank1.size(), 6u);
  EXPECT_EQ(r.map.indices(), (std::vector<std::size_t>{0, 0, 1, 1, 2, 2}));
  for (const auto& e : r.rank1) {
    EXPECT_EQ(rank_of(e), 1);
    // (1/3)|psi><psi| with |psi|^2 = 2.
    EXPECT_NEAR(std::real(e.trace()), 2.0 / 3.0, 1e-14);
  }
  EXPECT_LE(max_effect_distance(relabel(r.rank1, r.map), p), kTol.recon_tol);
}

TEST(SpectralRelabel, KeepsZeroEffectsOfTheSource) {
  const Povm<double> p({identity(2) / 2.0, M::Zero(2, 2), identity(2) / 2.0});
  const auto r = spectral_relabel(p);
  EXPECT_EQ(r.rank1.size(), 4u);
  EXPECT_EQ(r.map.target_size(), 3u);
  EXPECT_LE(max_effect_distance(relabel(r.rank1, r.map), p), kTol.recon_tol);
}

TEST(SpectralRelabel, CountBoundAndRankOneProperty) {
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 3;
    const Index n = 1 + trial % 6;
    const Index rank = std::max<Index>(1 + trial % d, (d + n - 1) / n);
    const auto p = random_povm<double>(d, n, 500 + trial, rank);
    const auto r = spectral_relabel(p);
    ASSERT_LE(r.rank1.size(), static_cast<std::size_t>(n * d));
    ASSERT_TRUE(is_rank1(r.rank1));
    ASSERT_NO_THROW(validate(r.rank1));
    ASSERT_LE(max_effect_distance(relabel(r.rank1, r.map), p), kTol.recon_tol);
  }
}

TEST(Classify, BasisPvmIsTypeA) {
  const auto c = classify(onb_pvm(2));
  EXPECT_TRUE(c.is_pvm);
  EXPECT_TRUE(c.is_rank1);
  EXPECT_TRUE(c.extremal);
  EXPECT_EQ(c.type, ExtremalType::A);
}

TEST(Classify, HalfHalfIsNotExtremal) {
  const auto c = classify(half_half());
  EXPECT_FALSE(c.extremal);
  EXPECT_EQ(c.type, ExtremalType::NotExtremalOrUnknown);
  EXPECT_EQ(c.rank_profile, (std::vector<Index>{2, 2}));
}

TEST(Classify, TypeDExample) {
  const auto c = classify(type_d_example());
  EXPECT_TRUE(c.extremal);
  EXPECT_FALSE(c.is_pvm);
  EXPECT_FALSE(c.is_rank1);
  EXPECT_EQ(c.type, ExtremalType::D);
  EXPECT_EQ(c.rank_profile, (std::vector<Index>{2, 2, 2}));
}

TEST(Classify, HigherRankPvmIsTypeB) {
  const auto c = classify(random_pvm<double>({2, 2}, 3));
  EXPECT_TRUE(c.is_pvm);
  EXPECT_FALSE(c.is_rank1);
  EXPECT_EQ(c.type, ExtremalType::B);
}

TEST(Classify, ProjectionPlusRankOneHybridIsTypeC) {
  // Rank-2 projection onto span{|0>,|1>} plus the three-outcome qubit POVM
  // embedded on span{|2>,|3>}.
  std::vector<M> effects;
  M proj = M::Zero(4, 4);
  proj(0, 0) = proj(1, 1) = 1;
  effects.push_back(proj);
  for (const auto& e : qubit_example()) {
    M big = M::Zero(4, 4);
    big.block(2, 2, 2, 2) = e;
    effects.push_back(big);
  }
  const auto c = classify(Povm<double>(std::move(effects)));
  EXPECT_TRUE(c.extremal);
  EXPECT_EQ(c.type, ExtremalType::C);
  EXPECT_EQ(c.rank_profile, (std::vector<Index>{2, 1, 1, 1}));
}

TEST(Classify, RankOneWithDOutcomesIsPvm) {
  // A rank-1 POVM with exactly d nonzero effects is a PVM.
  for (int trial = 0; trial < 200; ++trial) {
    const Index d = 2 + trial % 3;
    const auto c = classify(random_povm<double>(d, d, 7000 + trial, 1));
    ASSERT_TRUE(c.is_rank1);
    ASSERT_TRUE(c.is_pvm);
    ASSERT_EQ(c.type, ExtremalType::A);
  }
}

TEST(Povm, TracesSumToDimension) {
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 1 + trial % 4;
    const auto p = random_povm<double>(d, 1 + trial % 6, 300 + trial);
    double total = 0;
    for (const auto& e : p) {
      const double tr = std::real(e.trace());
      ASSERT_GE(tr, -kTol.psd_tol);
      ASSERT_LE(tr, static_cast<double>(d) + kTol.recon_tol);
      total += tr;
    }
    ASSERT_NEAR(total, static_cast<double>(d), kTol.recon_tol);
  }
}

TEST(Equivalent, IgnoresZeroEffectsButNotOrder) {
  const auto p = onb_pvm(2);
  const Povm<double> padded({p[0], M::Zero(2, 2), p[1]});
  EXPECT_TRUE(equivalent(p, padded));
  const Povm<double> swapped({p[1], p[0]});
  EXPECT_FALSE(equivalent(p, swapped));
  EXPECT_TRUE(equivalent(p, swapped, kTol, Matching::Permutation));
  EXPECT_FALSE(equivalent(p, half_half(), kTol, Matching::Permutation));
}

}  // namespace
