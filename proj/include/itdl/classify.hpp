// include/itdl/classify.hpp

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

#ifndef ITDL_CLASSIFY_HPP_
#define ITDL_CLASSIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "itdl/dataset.hpp"
#include "itdl/itds.hpp"

namespace itdl {

/// One-vs-rest linear classifier: score_c(x) = weights.row(c) x + bias(c).
struct LinearModel {
  Matrix weights;  ///< p x F
  Vector bias;     ///< p

  int num_classes() const { return static_cast<int>(weights.rows()); }
  int feature_dim() const { return static_cast<int>(weights.cols()); }
};

/// One-vs-rest hinge loss with l2 regularization (bias included as a
/// constant feature), trained by stochastic subgradient descent with step
/// 1 / (reg t) on per-feature standardized inputs; the returned model acts
/// on raw features. `features` is F x N. The sample order of every epoch
/// comes from `seed`.
LinearModel train_linear(const Matrix &features, const Labels &labels, double reg, int epochs,
                         std::uint64_t seed);

/// Argmax of the class scores; lowest class index on ties.
Labels predict(const LinearModel &model, const Matrix &features);

/// Learned atoms ready for coding: one matrix (shared) or one per class.
struct LearnedAtoms {
  Variant variant = Variant::kShared;
  std::vector<Matrix> atoms;
};

/// Shared: codes as they are. Dedicated: per signal, its codes under every
/// class dictionary stacked in class order 0..p-1.
Matrix build_features(const Matrix &shared_codes);
Matrix build_features(const std::vector<Matrix> &per_class_codes);

/// Least-squares codes of `signals` under the learned atoms, as features.
Matrix encode_features(const LearnedAtoms &learned, const Matrix &signals);

struct EvalReport {
  double accuracy = 0.0;
  double rmse = 0.0;
  double mi_estimate = 0.0;
  double bayes_bound = 0.0;
  std::vector<double> per_class_accuracy;

  std::string to_json() const;
};

/// Codes `test` on the learned supports, classifies, and reports accuracy,
/// RMSE (dedicated atoms reconstruct each signal with its own class's
/// atoms), a KDE estimate of I(codes; labels) and the Bayes-error bound.
EvalReport evaluate(const LinearModel &model, const LearnedAtoms &learned, const Dataset &test);

struct MaskedReconstruction {
  Matrix reconstructions;  ///< n x N, from the predicted class
  Labels predicted;
  Matrix residuals;  ///< p x N, observed-entry residual norms
};

/// For each signal and class: least squares on the observed rows only,
/// full reconstruction D_c x, prediction = class with the smallest
/// observed-entry residual.
MaskedReconstruction reconstruct_masked(const std::vector<Matrix> &class_atoms,
                                        const Dataset &masked, const Mask &mask);

/// Fraction of matching labels.
double accuracy(const Labels &truth, const Labels &predicted);

}  // namespace itdl

#endif  // ITDL_CLASSIFY_HPP_
