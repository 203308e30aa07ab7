// tests/dataset_test.cc

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

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "itdl/dataset.hpp"
#include "itdl/error.hpp"
#include "support/oracles.hpp"
#include "support/scratch.hpp"

namespace itdl {
namespace {

using itdl_test::ScratchDir;

TEST(LoadCsv, ParsesRowsAsColumns) {
  ScratchDir dir;
  Dataset ds = load_csv(dir.write("a.csv", "0,1,0\n0,0,1\n1,1,1\n"));
  EXPECT_EQ(ds.dim(), 2);
  EXPECT_EQ(ds.size(), 3);
  EXPECT_EQ(ds.num_classes(), 2);
  EXPECT_EQ(ds.class_counts(), (std::vector<int>{2, 1}));
  EXPECT_EQ(ds.signals()(1, 1), 1.0);
}

TEST(LoadCsv, NonNumericCellNamesRow) {
  ScratchDir dir;
  auto path = dir.write("bad.csv", "0,1,x\n");
  try {
    load_csv(path);
    FAIL() << "expected LoadError";
  } catch (const LoadError &e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
  }
}

TEST(LoadCsv, RemapsLabelsInFirstAppearanceOrder) {
  ScratchDir dir;
  std::vector<long> values;
  Dataset ds = load_csv(dir.write("l.csv", "5,1\n7,2\n5,3\n"), &values);
  EXPECT_EQ(ds.labels(), (Labels{0, 1, 0}));
  EXPECT_EQ(ds.num_classes(), 2);
  EXPECT_EQ(values, (std::vector<long>{5, 7}));
}

TEST(LoadCsv, RejectsRaggedEmptyAndZeroRows) {
  ScratchDir dir;
  EXPECT_THROW(load_csv(dir.write("r.csv", "0,1,2\n1,1\n")), LoadError);
  EXPECT_THROW(load_csv(dir.write("e.csv", "")), LoadError);
  EXPECT_THROW(load_csv(dir.write("z.csv", "0,1\n1,0\n")), LoadError);
  EXPECT_THROW(load_csv(dir / "missing.csv"), std::exception);
}

TEST(LoadCsv, SaveLoadRoundTripIsBitExact) {
  ScratchDir dir;
  Dataset ds = synth_gaussian_classes(5, 3, 4, 0.7, 11);
  save_csv(ds, dir / "d.csv");
  Dataset back = load_csv(dir / "d.csv");
  EXPECT_EQ(back.labels(), ds.labels());
  EXPECT_TRUE((back.signals().array() == ds.signals().array()).all());
}

TEST(Synth, SameSeedIsBitIdentical) {
  Dataset a = synth_gaussian_classes(16, 4, 10, 0.3, 5);
  Dataset b = synth_gaussian_classes(16, 4, 10, 0.3, 5);
  EXPECT_TRUE((a.signals().array() == b.signals().array()).all());
  EXPECT_EQ(a.labels(), b.labels());
  Dataset c = synth_gaussian_classes(16, 4, 10, 0.3, 6);
  EXPECT_FALSE((a.signals().array() == c.signals().array()).all());
}

TEST(Synth, ZeroSpreadGivesClassMeans) {
  Dataset ds = synth_gaussian_classes(6, 3, 5, 0.0, 2);
  for (int c = 0; c < 3; ++c) {
    Matrix s = ds.class_signals(c);
    for (int j = 1; j < s.cols(); ++j) EXPECT_TRUE(s.col(j) == s.col(0));
    EXPECT_NEAR(s.col(0).norm(), 1.0, 1e-12);
  }
}

TEST(Synth, RejectsBadArguments) {
  EXPECT_THROW(synth_gaussian_classes(4, 2, 3, -1.0, 1), ArgumentError);
  EXPECT_THROW(synth_gaussian_classes(0, 2, 3, 1.0, 1), ArgumentError);
  EXPECT_THROW(synth_gaussian_classes(4, 1, 3, 1.0, 1), ArgumentError);
  EXPECT_THROW(synth_gaussian_classes(4, 2, 1, 1.0, 1), ArgumentError);
}

TEST(Synth, LeastSquaresBaselineSeparatesTightBlobs) {
  Dataset ds = synth_gaussian_classes(16, 4, 100, 0.05, 9);
  auto [train, test] = split(ds, 0.5, 9);
  Labels pred = itdl_test::least_squares_classify(train.signals(), train.labels(),
                                                  test.signals(), 1e-6);
  EXPECT_GT(itdl_test::agreement(pred, test.labels()), 0.95);
}

TEST(Synth, ClassMeansConverge) {
  const int per_class = 10000;
  const double spread = 0.5;
  Dataset big = synth_gaussian_classes(3, 2, per_class, spread, 4);
  Dataset means = synth_gaussian_classes(3, 2, 2, 0.0, 4);
  for (int c = 0; c < 2; ++c) {
    Vector empirical = big.class_signals(c).rowwise().mean();
    Vector truth = means.class_signals(c).col(0);
    for (int i = 0; i < 3; ++i)
      EXPECT_LT(std::abs(empirical(i) - truth(i)), 3.0 * spread / std::sqrt(per_class));
  }
}

TEST(Synth, DigitLikeSignalsAreNonNegative) {
  Dataset ds = synth_subspace_classes(16, 4, 20, 3, 0.1, 3);
  EXPECT_EQ(ds.num_classes(), 4);
  EXPECT_GE(ds.signals().minCoeff(), 0.0);
  Dataset again = synth_subspace_classes(16, 4, 20, 3, 0.1, 3);
  EXPECT_TRUE((ds.signals().array() == again.signals().array()).all());
}

Dataset counts_dataset(const std::vector<int> &counts) {
  Labels labels;
  for (std::size_t c = 0; c < counts.size(); ++c) labels.insert(labels.end(), counts[c], static_cast<int>(c));
  Matrix y = Matrix::Ones(2, static_cast<Eigen::Index>(labels.size()));
  for (Eigen::Index j = 0; j < y.cols(); ++j) y(0, j) = static_cast<double>(j + 1);
  return Dataset(y, labels, static_cast<int>(counts.size()));
}

TEST(Split, ExactHalves) {
  auto [train, test] = split(counts_dataset({4, 4}), 0.5, 1);
  EXPECT_EQ(train.class_counts(), (std::vector<int>{2, 2}));
  EXPECT_EQ(test.class_counts(), (std::vector<int>{2, 2}));
}

TEST(Split, RoundsHalfUp) {
  auto [train, test] = split(counts_dataset({3, 3}), 0.5, 1);
  EXPECT_EQ(train.class_counts(), (std::vector<int>{2, 2}));
  EXPECT_EQ(test.class_counts(), (std::vector<int>{1, 1}));
}

TEST(Split, IsDeterministicPartition) {
  Dataset ds = counts_dataset({7, 5, 9});
  auto [a1, b1] = split(ds, 0.3, 42);
  auto [a2, b2] = split(ds, 0.3, 42);
  EXPECT_TRUE(a1.signals() == a2.signals());
  EXPECT_TRUE(b1.signals() == b2.signals());
  // First coordinates are unique sample ids.
  std::multiset<double> seen;
  for (const Dataset *d : {&a1, &b1})
    for (int j = 0; j < d->size(); ++j) seen.insert(d->signals()(0, j));
  std::multiset<double> all;
  for (int j = 0; j < ds.size(); ++j) all.insert(ds.signals()(0, j));
  EXPECT_EQ(seen, all);
  for (int c = 0; c < 3; ++c) {
    EXPECT_GE(a1.class_counts()[c], 1);
    EXPECT_GE(b1.class_counts()[c], 1);
  }
}

TEST(Split, RejectsFractionOutsideOpenInterval) {
  Dataset ds = counts_dataset({4, 4});
  EXPECT_THROW(split(ds, 0.0, 1), ArgumentError);
  EXPECT_THROW(split(ds, 1.0, 1), ArgumentError);
}

TEST(BinaryLabels, Indicator) {
  EXPECT_EQ(binary_labels(Labels{0, 1, 2, 1}, 1), (Labels{0, 1, 0, 1}));
  EXPECT_EQ(binary_labels(Labels{2, 2}, 2), (Labels{1, 1}));
  Dataset ds = counts_dataset({2, 3});
  auto rel = binary_labels(ds, 1);
  EXPECT_EQ(rel.source_class, 1);
  EXPECT_EQ(rel.labels01, (Labels{0, 0, 1, 1, 1}));
  EXPECT_THROW(binary_labels(ds, 2), ArgumentError);
}

TEST(MaskPixels, ZeroFractionIsIdentity) {
  Dataset ds = synth_gaussian_classes(8, 2, 3, 0.5, 1);
  auto m = mask_pixels(ds, 0.0, 3);
  EXPECT_TRUE(m.mask.all());
  EXPECT_TRUE(m.data.signals() == ds.signals());
}

TEST(MaskPixels, ExactCountPerColumnAndDeterministic) {
  Dataset ds = synth_gaussian_classes(256, 2, 3, 0.5, 1);
  auto m = mask_pixels(ds, 0.6, 3);
  for (Eigen::Index j = 0; j < m.mask.cols(); ++j) {
    EXPECT_EQ((!m.mask.col(j).array()).count(), 154);
    for (Eigen::Index i = 0; i < m.mask.rows(); ++i)
      EXPECT_EQ(m.data.signals()(i, j), m.mask(i, j) ? ds.signals()(i, j) : 0.0);
  }
  auto again = mask_pixels(ds, 0.6, 3);
  EXPECT_TRUE(again.mask == m.mask);
  EXPECT_THROW(mask_pixels(ds, 1.0, 3), ArgumentError);
}

TEST(MaskPixels, CsvRoundTrip) {
  ScratchDir dir;
  Dataset ds = synth_gaussian_classes(7, 2, 3, 0.5, 1);
  auto m = mask_pixels(ds, 0.4, 8);
  save_mask_csv(m.mask, dir / "m.csv");
  EXPECT_TRUE(load_mask_csv(dir / "m.csv") == m.mask);
}

TEST(NormalizeSignals, UnitColumns) {
  Dataset ds = normalize_signals(synth_gaussian_classes(5, 2, 4, 2.0, 3));
  for (int j = 0; j < ds.size(); ++j) EXPECT_NEAR(ds.signals().col(j).norm(), 1.0, 1e-12);
}

}  // namespace
}  // namespace itdl
