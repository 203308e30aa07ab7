// include/itdl/dataset.hpp

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

#ifndef ITDL_DATASET_HPP_
#define ITDL_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace itdl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;
/// Observation mask, n x N; true = observed.
using Mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Labelled signals. Columns of `signals` are samples; labels are
/// contiguous 0..p-1 and every class is non-empty.
class Dataset {
 public:
  Dataset() = default;
  /// Validates labels against `num_classes`. All-zero columns are rejected
  /// by load_csv, not here (masking may legitimately zero a column).
  Dataset(Matrix signals, Labels labels, int num_classes);

  const Matrix &signals() const { return signals_; }
  const Labels &labels() const { return labels_; }
  int num_classes() const { return num_classes_; }
  const std::vector<int> &class_counts() const { return class_counts_; }
  int dim() const { return static_cast<int>(signals_.rows()); }
  int size() const { return static_cast<int>(signals_.cols()); }

  /// Column indices belonging to class c, ascending.
  std::vector<int> members(int c) const;
  /// Columns `cols` (in that order) with labels kept as-is. Every class
  /// must remain represented.
  Dataset subset(const std::vector<int> &cols) const;
  /// Signals of class c only.
  Matrix class_signals(int c) const;

 private:
  Matrix signals_;
  Labels labels_;
  int num_classes_ = 0;
  std::vector<int> class_counts_;
};

/// One row per sample: integer label, then the feature values.
/// Labels are remapped to 0..p-1 in order of first appearance.
Dataset load_csv(const std::filesystem::path &path);
/// Same; `label_values` receives the original label of each class id.
Dataset load_csv(const std::filesystem::path &path, std::vector<long> *label_values);
/// Writes the remapped labels; load_csv(save_csv(ds)) == ds bit-exactly.
void save_csv(const Dataset &ds, const std::filesystem::path &path);

/// p class means uniform on the unit sphere in R^n; samples are
/// mean + spread * N(0, I).
Dataset synth_gaussian_classes(int n, int p, int per_class, double spread,
                               std::uint64_t seed);

/// Digit-like classes: class c owns `styles` random non-negative unit
/// prototypes; a sample is a random convex mix of its class prototypes plus
/// spread * N(0, I), clamped at zero like pixel intensities.
Dataset synth_subspace_classes(int n, int p, int per_class, int styles,
                               double spread, std::uint64_t seed);

/// Stratified split; class c contributes round_half_up(fraction * N_c)
/// samples to train, clamped so both sides keep at least one.
std::pair<Dataset, Dataset> split(const Dataset &ds, double train_fraction,
                                  std::uint64_t seed);

struct BinaryRelabeling {
  int source_class = 0;
  Labels labels01;
};

BinaryRelabeling binary_labels(const Dataset &ds, int c);
Labels binary_labels(const Labels &labels, int c);

struct MaskedDataset {
  Dataset data;
  Mask mask;
};

/// Zeroes exactly round(missing_fraction * n) uniformly chosen entries per
/// column and records them as false in the mask.
MaskedDataset mask_pixels(const Dataset &ds, double missing_fraction,
                          std::uint64_t seed);

/// Mask as 0/1 CSV, one row per sample (matching the dataset file layout).
void save_mask_csv(const Mask &mask, const std::filesystem::path &path);
Mask load_mask_csv(const std::filesystem::path &path);

/// Per-column l2 normalization.
Dataset normalize_signals(const Dataset &ds);

}  // namespace itdl

#endif  // ITDL_DATASET_HPP_
