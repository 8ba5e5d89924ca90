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

#include "povm/linalg.hpp"

#include <gtest/gtest.h>

#include "support/exact_rank.hpp"
#include "support/fixtures.hpp"

using namespace povm;
using namespace povm::testing;

namespace {

const Tolerances kTol;

TEST(EigHerm, IdentityHasUnitSpectrum) {
  const auto s = eig_herm(identity(2));
  EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1), 1.0, 1e-15);
  EXPECT_LT((s.projection(0) + s.projection(1) - identity(2)).norm(), 1e-14);
  EXPECT_LT((s.reconstruct() - identity(2)).norm(), 1e-14);
}

TEST(EigHerm, PauliXSpectrumAndPhaseFixedVectors) {
  const auto s = eig_herm(sigma_x());
  EXPECT_NEAR(s.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1), -1.0, 1e-15);
  M plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  EXPECT_LT((s.projection(0) - plus).norm(), 1e-14);
  EXPECT_LT((s.projection(1) - minus).norm(), 1e-14);
  // First component of each eigenvector is real positive.
  for (Index k = 0; k < 2; ++k) {
    EXPECT_GT(s.eigenvectors(0, k).real(), 0.0);
    EXPECT_EQ(s.eigenvectors(0, k).imag(), 0.0);
  }
}

TEST(EigHerm, TypeDEffectSpectrum) {
  const auto s = eig_herm(type_d_example()[0]);
  const double expected[] = {2.0 / 3, 2.0 / 3, 0, 0};
  for (Index k = 0; k < 4; ++k) EXPECT_NEAR(s.eigenvalues(k), expected[k], 1e-14);
}

TEST(EigHerm, AcceptsExpressions) {
  const auto s = eig_herm(sigma_z() + identity(2));
  EXPECT_NEAR(s.eigenvalues(0), 2.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues(1), 0.0, 1e-15);
}

TEST(EigHerm, DeterministicForIdenticalInput) {
  Rng rng(7);
  const M h = random_hermitian(4, rng);
  const auto a = eig_herm(h);
  const auto b = eig_herm(h);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(EigHerm, RejectsNonHermitian) {
  try {
    eig_herm(ket_bra(2, 0, 1));
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(EigHerm, RoundTripOnRandomMatrices) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = 2 + trial % 4;
    const M h = random_hermitian(d, rng);
    const auto s = eig_herm(h);
    ASSERT_LE((s.reconstruct() - h).norm(), kTol.recon_tol * h.norm());
    for (Index k = 1; k < d; ++k) ASSERT_GE(s.eigenvalues(k - 1), s.eigenvalues(k));
    for (Index a = 0; a < d; ++a) {
      for (Index b = a + 1; b < d; ++b) {
        ASSERT_LE((s.projection(a) * s.projection(b)).norm(), kTol.recon_tol);
      }
    }
  }
}

TEST(IsPsd, Examples) {
  EXPECT_TRUE(is_psd(M::Zero(2, 2)));
  EXPECT_FALSE(is_psd(-identity(2)));
  M a(2, 2);
  const double off = 1.0 / (2.0 * std::sqrt(2.0));
  a << 0.25, off, off, 0.5;
  EXPECT_TRUE(is_psd(a));
  EXPECT_NEAR(std::abs(a.determinant()), 0.0, 1e-16);
}

TEST(IsPsd, ToleratesTinyNegativeEigenvalue) {
  M m = M::Zero(2, 2);
  m(1, 1) = -1e-12;
  EXPECT_TRUE(is_psd(m));
  m(1, 1) = -1e-6;
  EXPECT_FALSE(is_psd(m));
}

TEST(RankOf, Examples) {
  EXPECT_EQ(rank_of(identity(3)), 3);
  EXPECT_EQ(rank_of(ket_bra(2, 0, 0)), 1);
  EXPECT_EQ(rank_of(type_d_example()[1]), 2);
  EXPECT_EQ(rank_of(M::Zero(3, 3)), 0);
}

TEST(InvSqrt, Examples) {
  EXPECT_LT((inv_sqrt(identity(2)) - identity(2)).norm(), 1e-15);

  M t = M::Zero(2, 2);
  t(0, 0) = 2;
  t(1, 1) = 1;
  M expected = M::Zero(2, 2);
  expected(0, 0) = 1 / std::sqrt(2.0);
  expected(1, 1) = 1;
  EXPECT_LT((inv_sqrt(t) - expected).norm(), 1e-15);

  // T = I + (I + sz)/2 has T^{-1/2} = c+ I + c- sz, c+- = (1 +- sqrt2) / (2 sqrt2).
  const double s2 = std::sqrt(2.0);
  const double cp = (1 + s2) / (2 * s2);
  const double cm = (1 - s2) / (2 * s2);
  const M tt = identity(2) + (identity(2) + sigma_z()) / 2.0;
  EXPECT_LT((inv_sqrt(tt) - (cp * identity(2) + cm * sigma_z())).norm(), 1e-15);
}

TEST(InvSqrt, RejectsSingular) {
  try {
    inv_sqrt(ket_bra(2, 0, 0));
    FAIL() << "expected NotPositiveDefinite";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
}

TEST(InvSqrt, ContractOnRandomPositiveMatrices) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const Index d = 2 + trial % 4;
    const M g = complex_gaussian<double>(d, d, rng);
    const M m = g * g.adjoint() + 0.1 * identity(d);
    const M r = inv_sqrt(m);
    ASSERT_LE((r * m * r - identity(d)).norm(), kTol.recon_tol);
    ASSERT_LE((r - r.adjoint()).norm(), 1e-14);
    ASSERT_GT(eig_herm(r).eigenvalues.minCoeff(), 0.0);
  }
}

TEST(Vectorize, RowMajorLayout) {
  const CVector<double> z = vectorize(M::Zero(2, 2));
  EXPECT_EQ(z, CVector<double>::Zero(4));
  CVector<double> id(4);
  id << 1, 0, 0, 1;
  EXPECT_EQ(vectorize(identity(2)), id);
  CVector<double> e01(4);
  e01 << 0, 1, 0, 0;
  EXPECT_EQ(vectorize(ket_bra(2, 0, 1)), e01);
}

TEST(LinearlyIndependent, DisjointProjections) {
  const std::vector<M> ops{ket_bra(2, 0, 0), ket_bra(2, 1, 1)};
  const auto r = linearly_independent(ops);
  EXPECT_TRUE(r.independent);
  EXPECT_FALSE(r.dependence.has_value());
}

TEST(LinearlyIndependent, ExplicitRelationIsRecovered) {
  const std::vector<M> ops{identity(2), sigma_x(), identity(2) + sigma_x()};
  const auto r = linearly_independent(ops);
  ASSERT_FALSE(r.independent);
  ASSERT_TRUE(r.hermitian_inputs);
  const RVector<double> l = r.real_dependence();
  EXPECT_NEAR(l.norm(), 1.0, 1e-14);
  // Proportional to (1, 1, -1).
  EXPECT_NEAR(l(0) / l(2), -1.0, 1e-12);
  EXPECT_NEAR(l(1) / l(2), -1.0, 1e-12);
  EXPECT_EQ(r.dependence->imag().norm(), 0.0);
}

TEST(LinearlyIndependent, TypeDCrossOperatorsAreIndependent) {
  // E_j^{kl} = |psi_k(j)><psi_l(j)|, psi_1(j) = |1> + conj(w^j)|3>,
  // psi_2(j) = |2> + conj(w^j)|4>.
  std::vector<M> ops;
  for (int j = 1; j <= 3; ++j) {
    const C wbar = std::conj(std::polar(1.0, 2 * M_PI * j / 3));
    CVector<double> p1 = CVector<double>::Zero(4), p2 = CVector<double>::Zero(4);
    p1(0) = 1;
    p1(2) = wbar;
    p2(1) = 1;
    p2(3) = wbar;
    const CVector<double> psi[2] = {p1, p2};
    for (const auto& a : psi) {
      for (const auto& b : psi) ops.push_back(a * b.adjoint());
    }
  }
  ASSERT_EQ(ops.size(), 12u);
  const auto r = linearly_independent(ops);
  EXPECT_TRUE(r.independent);
  EXPECT_FALSE(r.hermitian_inputs);
  EXPECT_FALSE(r.borderline);
}

TEST(LinearlyIndependent, MoreThanSpaceDimensionIsDependent) {
  Rng rng(5);
  for (Index d = 1; d <= 3; ++d) {
    std::vector<M> ops;
    for (Index k = 0; k < d * d + 1; ++k) ops.push_back(random_hermitian(d, rng));
    const auto r = linearly_independent(ops);
    EXPECT_FALSE(r.independent) << "d=" << d;
    double scale = 0;
    for (const auto& m : ops) scale = std::max(scale, m.norm());
    EXPECT_LE(r.residual, kTol.recon_tol * scale);
  }
}

TEST(LinearlyIndependent, ZeroOperatorIsDependent) {
  const std::vector<M> ops{identity(2), M::Zero(2, 2)};
  const auto r = linearly_independent(ops);
  ASSERT_FALSE(r.independent);
  EXPECT_NEAR(std::abs((*r.dependence)(1)), 1.0, 1e-15);
}

TEST(LinearlyIndependent, InputErrors) {
  try {
    linearly_independent(std::vector<M>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyInput);
  }
  try {
    linearly_independent(std::vector<M>{identity(2), identity(3)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(LinearlyIndependent, AgreesWithExactOracle) {
  std::mt19937_64 rng(31337);
  int dependent = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto set = random_integer_set(rng);
    const bool exact = exact_rank(set.ops) == set.ops.size();
    const auto r = linearly_independent(set.ops);
    ASSERT_EQ(r.independent, exact) << "trial " << trial;
    if (!exact) {
      ++dependent;
      double scale = 0;
      for (const auto& m : set.ops) scale = std::max(scale, m.norm());
      ASSERT_LE(r.residual, kTol.recon_tol * scale);
    }
  }
  EXPECT_GT(dependent, 100);
  EXPECT_LT(dependent, 400);
}

TEST(LinearlyIndependent, ComplexDependenceForNonHermitianSets) {
  // |0><1| and i|0><1| are dependent over C but not via real coefficients
  // of a Hermitian set; the returned vector must still annihilate them.
  const std::vector<M> ops{ket_bra(2, 0, 1), C(0, 1) * ket_bra(2, 0, 1)};
  const auto r = linearly_independent(ops);
  ASSERT_FALSE(r.independent);
  EXPECT_FALSE(r.hermitian_inputs);
  EXPECT_LE(r.residual, 1e-15);
}

TEST(ScalarTemplate, LongDoubleKernel) {
  using ML = CMatrix<long double>;
  ML t = ML::Identity(2, 2);
  t(0, 0) = 2;
  const ML r = inv_sqrt(t);
  EXPECT_NEAR(static_cast<double>(std::real(r(0, 0))), 1 / std::sqrt(2.0), 1e-15);
  const std::vector<ML> ops{ML::Identity(2, 2), t};
  EXPECT_TRUE(linearly_independent(ops).independent);
}

}  // namespace
