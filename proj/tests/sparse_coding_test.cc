// tests/sparse_coding_test.cc

// Copyright 2026  The ITDL Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "itdl/error.hpp"
#include "itdl/sparse_coding.hpp"
#include "support/oracles.hpp"

namespace itdl {
namespace {

using itdl_test::gaussian_matrix;
using itdl_test::unit_columns;

Dictionary random_dict(int n, int k, std::uint64_t seed) {
  return Dictionary(unit_columns(n, k, seed));
}

TEST(DictionaryTest, EnforcesUnitNorm) {
  EXPECT_THROW(Dictionary(Matrix::Ones(2, 2)), ArgumentError);
  EXPECT_THROW(Dictionary(Matrix(0, 0)), ArgumentError);
  Dictionary d = Dictionary::normalized(Matrix::Ones(2, 2));
  EXPECT_NEAR(d.atom(0).norm(), 1.0, 1e-15);
  EXPECT_THROW(Dictionary::normalized(Matrix::Zero(2, 1)), ArgumentError);
}

TEST(Omp, IdentityPicksLargestEntry) {
  Dictionary d(Matrix::Identity(3, 3));
  Vector y(3);
  y << 0, 2, 0;
  Vector x = omp(d, y, 1);
  EXPECT_EQ(x(1), 2.0);
  EXPECT_EQ(x(0), 0.0);
  EXPECT_EQ(x(2), 0.0);
}

TEST(Omp, ExactAtomHasUnitCoefficient) {
  Dictionary d = random_dict(6, 9, 4);
  for (int j = 0; j < 9; ++j) {
    Vector x = omp(d, d.atom(j), 1);
    EXPECT_NEAR(x(j), 1.0, 1e-12);
    EXPECT_EQ((x.array() != 0.0).count(), 1);
  }
}

TEST(Omp, MatchesStepwiseNaiveOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Dictionary d = random_dict(4, 5, seed);
    Vector y = gaussian_matrix(4, 1, 100 + seed).col(0);
    Vector ours = omp(d, y, 2);
    Vector ref = itdl_test::naive_omp(d.atoms(), y, 2);
    for (int j = 0; j < 5; ++j) {
      EXPECT_EQ(ours(j) != 0.0, ref(j) != 0.0) << "seed " << seed;
      EXPECT_NEAR(ours(j), ref(j), 1e-10);
    }
  }
}

TEST(Omp, ZeroSignalGivesZeroCode) {
  Dictionary d = random_dict(4, 6, 1);
  EXPECT_TRUE(omp(d, Vector::Zero(4), 3).isZero(0.0));
}

TEST(Omp, TieBreaksOnLowestIndex) {
  Matrix atoms(2, 3);
  atoms << 1, 0, 1 / std::sqrt(2.0), 0, 1, 1 / std::sqrt(2.0);
  Dictionary d(atoms);
  Vector y(2);
  y << 1, 1;
  std::vector<int> support;
  omp(d, y, 1, &support);
  EXPECT_EQ(support.front(), 2);  // strictly best
  Vector y2(2);
  y2 << 1, -1;  // atoms 0 and 1 tie at |.| = 1
  omp(d, y2, 1, &support);
  EXPECT_EQ(support.front(), 0);
}

TEST(Omp, ResidualOrthogonalAndMonotoneInSparsity) {
  Dictionary d = random_dict(10, 20, 7);
  Vector y = gaussian_matrix(10, 1, 8).col(0);
  double prev = y.norm();
  for (int t = 1; t <= 6; ++t) {
    std::vector<int> support;
    Vector x = omp(d, y, t, &support);
    EXPECT_LE((x.array() != 0.0).count(), t);
    Vector r = y - d.atoms() * x;
    for (int j : support) EXPECT_NEAR(d.atom(j).dot(r), 0.0, 1e-8);
    EXPECT_LE(r.norm(), prev + 1e-12);
    prev = r.norm();
  }
}

TEST(Omp, RejectsBadSparsity) {
  Dictionary d = random_dict(3, 5, 1);
  EXPECT_THROW(omp(d, Vector::Ones(3), 0), ArgumentError);
  EXPECT_THROW(omp(d, Vector::Ones(3), 4), ArgumentError);
}

TEST(Somp, SingleSignalReducesToOmp) {
  Dictionary d = random_dict(8, 15, 2);
  Matrix y = gaussian_matrix(8, 1, 3);
  auto r = somp(d, y, 3);
  std::vector<int> support;
  omp(d, y.col(0), 3, &support);
  EXPECT_EQ(r.selection.indices, support);
}

TEST(Somp, RepeatedAtomSignals) {
  Dictionary d = random_dict(6, 10, 5);
  Matrix y(6, 4);
  for (int j = 0; j < 4; ++j) y.col(j) = d.atom(7);
  auto r = somp(d, y, 2);
  EXPECT_EQ(r.selection.indices.front(), 7);
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(r.codes.coeffs(0, j), 1.0, 1e-10);
    EXPECT_NEAR(r.codes.coeffs(1, j), 0.0, 1e-10);
  }
}

TEST(Somp, ResidualMatchesNaiveGreedy) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Dictionary d = random_dict(4, 5, seed);
    Matrix y = gaussian_matrix(4, 6, 50 + seed);
    auto r = somp(d, y, 2);
    // Naive greedy: score sum_i |d^T r_i| from scratch each round.
    std::vector<int> support;
    Matrix res = y;
    for (int t = 0; t < 2; ++t) {
      int best = -1;
      double best_score = -1;
      for (int j = 0; j < 5; ++j) {
        if (std::find(support.begin(), support.end(), j) != support.end()) continue;
        double s = (d.atom(j).transpose() * res).cwiseAbs().sum();
        if (s > best_score) {
          best_score = s;
          best = j;
        }
      }
      support.push_back(best);
      Matrix ds(4, static_cast<Eigen::Index>(support.size()));
      for (std::size_t k = 0; k < support.size(); ++k) ds.col(static_cast<Eigen::Index>(k)) = d.atom(support[k]);
      res = y - ds * ds.colPivHouseholderQr().solve(y);
    }
    EXPECT_EQ(r.selection.indices, support);
    Matrix ds = gather_atoms(d, r.selection);
    double ours = (y - ds * r.codes.coeffs).norm();
    EXPECT_LE(ours, (1 + 1e-9) * res.norm());
  }
}

TEST(Pinv, OrthonormalColumnsGiveTranspose) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(6, 3, 1));
  Matrix q = qr.householderQ() * Matrix::Identity(6, 3);
  EXPECT_TRUE(pinv(q).isApprox(q.transpose(), 1e-12));
}

TEST(Pinv, DuplicatedColumnSatisfiesPenroseIdentities) {
  Matrix a = gaussian_matrix(5, 3, 2);
  a.col(2) = a.col(0);
  Matrix p = pinv(a);
  EXPECT_LT((a * p * a - a).norm(), 1e-8);
  EXPECT_LT((p * a * p - p).norm(), 1e-8);
  EXPECT_LT(((a * p).transpose() - a * p).norm(), 1e-8);
  EXPECT_LT(((p * a).transpose() - p * a).norm(), 1e-8);
}

TEST(Pinv, ScalarAndFullRankForm) {
  Matrix two(1, 1);
  two << 2.0;
  EXPECT_DOUBLE_EQ(pinv(two)(0, 0), 0.5);
  Matrix a = gaussian_matrix(7, 3, 9);
  Matrix normal = (a.transpose() * a).inverse() * a.transpose();
  EXPECT_TRUE(pinv(a).isApprox(normal, 1e-10));
}

TEST(CodeLs, InSpanSignalsReconstructExactly) {
  Dictionary d = random_dict(8, 12, 3);
  Selection sel{{2, 5, 9}};
  Matrix x = gaussian_matrix(3, 10, 4);
  Matrix y = gather_atoms(d, sel) * x;
  auto r = code_ls(d, sel, y);
  EXPECT_LT((y - r.reconstruction).norm(), 1e-8);
  EXPECT_TRUE(r.codes.coeffs.isApprox(x, 1e-10));
}

TEST(CodeLs, SingleAtomGivesRowOfOnes) {
  Dictionary d = random_dict(5, 4, 1);
  Matrix y(5, 3);
  for (int j = 0; j < 3; ++j) y.col(j) = d.atom(1);
  auto r = code_ls(d, Selection{{1}}, y);
  EXPECT_TRUE(r.codes.coeffs.isApprox(Matrix::Ones(1, 3), 1e-12));
}

TEST(CodeLs, LeastSquaresOptimalUnderPerturbation) {
  Dictionary d = random_dict(8, 12, 6);
  Selection sel{{0, 3, 4, 11}};
  Matrix y = gaussian_matrix(8, 5, 7);
  auto r = code_ls(d, sel, y);
  Matrix ds = gather_atoms(d, sel);
  const double best = (y - r.reconstruction).norm();
  for (std::uint64_t k = 0; k < 100; ++k) {
    Matrix dx = 0.1 * gaussian_matrix(4, 5, 1000 + k);
    EXPECT_LE(best, (y - ds * (r.codes.coeffs + dx)).norm());
  }
  EXPECT_NEAR(best * best, itdl_test::projection_residual(ds, y), 1e-8);
}

TEST(CodeLs, MoreAtomsThanDimensionsStillCodes) {
  Dictionary d = random_dict(3, 6, 2);
  Matrix y = gaussian_matrix(3, 2, 3);
  auto r = code_ls(d, Selection{{0, 1, 2, 3}}, y);
  EXPECT_LT((y - r.reconstruction).norm(), 1e-8);
}

TEST(Ksvd, RecoversRepeatedOrthonormalAtoms) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(8, 4, 3));
  Matrix q = qr.householderQ() * Matrix::Identity(8, 4);
  Matrix y(8, 40);
  for (int j = 0; j < 40; ++j) y.col(j) = (1.0 + 0.1 * (j % 5)) * q.col(j % 4);
  auto r = ksvd_train(y, 4, 1, 5, 11);
  Matrix recon = r.dictionary.atoms() * r.codes.coeffs;
  EXPECT_LT(rmse(y, recon), 1e-8);
}

TEST(Ksvd, ObjectiveNonIncreasingAndUnitNorm) {
  Matrix y = gaussian_matrix(10, 60, 21);
  auto r = ksvd_train(y, 15, 3, 5, 2);
  ASSERT_EQ(r.objective.size(), 5u);
  for (std::size_t i = 1; i < r.objective.size(); ++i)
    EXPECT_LE(r.objective[i], r.objective[i - 1] * (1 + 1e-12));
  for (int k = 0; k < 15; ++k) EXPECT_NEAR(r.dictionary.atom(k).norm(), 1.0, 1e-10);
  for (Eigen::Index j = 0; j < r.codes.coeffs.cols(); ++j)
    EXPECT_LE((r.codes.coeffs.col(j).array() != 0.0).count(), 3);
}

TEST(Ksvd, ArgumentChecks) {
  Matrix y = gaussian_matrix(4, 5, 1);
  EXPECT_THROW(ksvd_init(y, 6, 1, 1, 1), ArgumentError);
  EXPECT_THROW(ksvd_init(y, 3, 1, 0, 1), ArgumentError);
  Dictionary d = ksvd_init(y, 3, 1, 1, 1);
  EXPECT_EQ(d.size(), 3);
}

TEST(Ksvd, DeterministicForSeed) {
  Matrix y = gaussian_matrix(6, 30, 4);
  Dictionary a = ksvd_init(y, 8, 2, 3, 9);
  Dictionary b = ksvd_init(y, 8, 2, 3, 9);
  EXPECT_TRUE((a.atoms().array() == b.atoms().array()).all());
}

TEST(Rmse, Definition) {
  Matrix y = Matrix::Ones(2, 2);
  EXPECT_EQ(rmse(y, y), 0.0);
  EXPECT_DOUBLE_EQ(rmse(y, Matrix::Zero(2, 2)), 1.0);
}

}  // namespace
}  // namespace itdl
