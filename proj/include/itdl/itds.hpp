// include/itdl/itds.hpp

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

#ifndef ITDL_ITDS_HPP_
#define ITDL_ITDS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itdl/info_measures.hpp"
#include "itdl/sparse_coding.hpp"

namespace itdl {

enum class Variant { kShared, kDedicated };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

/// Which of the three selection terms are active.
struct SelectionMode {
  Variant variant = Variant::kShared;
  bool compact = true;
  bool discriminative = true;
  bool reconstructive = true;

  /// Comma-separated subset of {compact, discriminative, reconstructive};
  /// "all" or "" selects all three.
  static SelectionMode with_ablation(Variant variant, std::string_view terms);
  std::string ablation() const;
  bool compact_only() const { return compact && !discriminative && !reconstructive; }
};

/// Weights of the compactness, discrimination and reconstruction terms.
struct SelectionWeights {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;

  void validate() const;
};

/// Models shared by all scoring terms.
struct SelectionModels {
  GpModel gp;
  ResidualModel residual;
  KdeConfig kde;
};

/// lambda1 = 1; lambda2 and lambda3 are the largest single-atom
/// discrimination / reconstruction gains divided by the largest single-atom
/// compactness gain (the first greedy step of each criterion).
/// `initial` codes every column of `discrim_labels`; `recon_signals` may be
/// a class subset.
SelectionWeights estimate_lambdas(const Dictionary &dict, const SparseCodes &initial,
                                  const Labels &discrim_labels, const Matrix &recon_signals,
                                  const SelectionModels &models);

struct RoundRecord {
  int index = -1;
  double compact_gain = 0.0;  ///< raw gains; 0 for inactive terms
  double discrim_gain = 0.0;
  double recon_gain = 0.0;
  double total = 0.0;
  /// Weighted score of every candidate this round (NaN for taken atoms,
  /// -inf for excluded ones).
  std::vector<double> candidate_totals;
};

struct SelectionResult {
  int class_id = -1;  ///< -1 for shared atoms
  Selection selection;
  SparseCodes codes;     ///< pinv(D*) Y (Y_c in dedicated mode)
  Matrix reconstruction;
  SelectionWeights weights;
  std::vector<RoundRecord> rounds;
};

/// Greedy selection of `sparsity` atoms maximizing
/// lambda1 dCompact + lambda2 dDiscrim + lambda3 dRecon per round.
/// `initial` are pursuit codes of `signals` on the full dictionary.
SelectionResult select_shared(const Dictionary &dict, const Matrix &signals,
                              const Labels &labels, int sparsity, const SelectionMode &mode,
                              const SelectionWeights &weights, const SelectionModels &models,
                              const SparseCodes &initial);

struct WeightOverrides {
  std::optional<double> lambda2;
  std::optional<double> lambda3;
};

/// One selection per class: discrimination against binary labels over all
/// samples, reconstruction of that class's signals only. Weights are
/// estimated per class unless overridden.
std::vector<SelectionResult> select_dedicated(const Dictionary &dict, const Matrix &signals,
                                              const Labels &labels, int sparsity,
                                              const SelectionMode &mode,
                                              const SelectionModels &models,
                                              const SparseCodes &initial,
                                              const WeightOverrides &overrides = {});

/// JSON text: mode, and per selection its lambdas and per-round records.
std::string selection_report_json(const std::vector<SelectionResult> &results,
                                  const SelectionMode &mode);

}  // namespace itdl

#endif  // ITDL_ITDS_HPP_
