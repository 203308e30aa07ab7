// src/itds.cpp

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

#include "itdl/itds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "itdl/dataset.hpp"
#include "itdl/error.hpp"

namespace itdl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix restrict_rows(const Matrix &codes, const std::vector<int> &rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), codes.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = codes.row(rows[r]);
  return out;
}

// Discrimination gain of each free atom: I(X_{S+a}; C) - I(X_S; C).
std::vector<double> discrim_gains(const Matrix &codes, const Labels &labels,
                                  const Selection &selected, const KdeConfig &kde) {
  const int k = static_cast<int>(codes.rows());
  std::vector<double> gains(static_cast<std::size_t>(k), kNaN);
  const double base = mi_codes_labels(restrict_rows(codes, selected.indices), labels, kde);
  std::vector<int> rows = selected.indices;
  rows.push_back(0);
  for (int a = 0; a < k; ++a) {
    if (selected.contains(a)) continue;
    rows.back() = a;
    gains[a] = mi_codes_labels(restrict_rows(codes, rows), labels, kde) - base;
  }
  return gains;
}

double max_finite(const std::vector<double> &v) {
  double m = -kInf;
  for (double x : v)
    if (std::isfinite(x)) m = std::max(m, x);
  return m;
}

SelectionResult greedy_select(const Dictionary &dict, const Matrix &codes,
                              const Labels &discrim_labels, const Matrix &recon_signals,
                              int sparsity, const SelectionMode &mode,
                              const SelectionWeights &weights, const SelectionModels &models) {
  const int k = dict.size();
  if (sparsity < 1 || sparsity >= k)
    throw ArgumentError("selection: sparsity T must satisfy 1 <= T < K (T=" +
                        std::to_string(sparsity) + ", K=" + std::to_string(k) + ")");
  if (sparsity > dict.dim())
    throw ArgumentError("selection: sparsity exceeds signal dimension");
  if (!mode.compact && !mode.discriminative && !mode.reconstructive)
    throw ArgumentError("selection: ablation leaves no active term");
  if (codes.rows() != k) throw ArgumentError("selection: initial codes do not match dictionary");
  weights.validate();

  SelectionResult out;
  out.weights = weights;
  std::vector<bool> excluded(static_cast<std::size_t>(k), false);
  const std::vector<double> zeros(static_cast<std::size_t>(k), 0.0);

  for (int t = 0; t < sparsity; ++t) {
    const Selection &sel = out.selection;
    auto compact = mode.compact ? gp_compact_gains(models.gp, sel) : zeros;
    auto discrim = mode.discriminative ? discrim_gains(codes, discrim_labels, sel, models.kde) : zeros;
    auto recon = mode.reconstructive ? recon_gains(dict, sel, recon_signals, models.residual) : zeros;

    RoundRecord rec;
    rec.candidate_totals.assign(static_cast<std::size_t>(k), kNaN);
    int best = -1;
    double best_total = -kInf;
    for (int a = 0; a < k; ++a) {
      if (sel.contains(a)) continue;
      if (mode.compact && compact[a] == -kInf) excluded[a] = true;
      if (excluded[a]) {
        rec.candidate_totals[a] = -kInf;
        continue;
      }
      double total = (mode.compact ? weights.lambda1 * compact[a] : 0.0) +
                     (mode.discriminative ? weights.lambda2 * discrim[a] : 0.0) +
                     (mode.reconstructive ? weights.lambda3 * recon[a] : 0.0);
      if (std::isnan(total)) total = -kInf;
      rec.candidate_totals[a] = total;
      if (best < 0 || total > best_total) {
        best = a;
        best_total = total;
      }
    }
    if (best < 0) {
      // Every remaining atom duplicates a selected one; rank them on the
      // other terms so the support still reaches T atoms.
      for (int a = 0; a < k; ++a) {
        if (sel.contains(a)) continue;
        double total = (mode.discriminative ? weights.lambda2 * discrim[a] : 0.0) +
                       (mode.reconstructive ? weights.lambda3 * recon[a] : 0.0);
        if (best < 0 || total > best_total) {
          best = a;
          best_total = total;
        }
      }
    }
    rec.index = best;
    rec.compact_gain = mode.compact ? compact[best] : 0.0;
    rec.discrim_gain = mode.discriminative ? discrim[best] : 0.0;
    rec.recon_gain = mode.reconstructive ? recon[best] : 0.0;
    rec.total = best_total;
    out.rounds.push_back(std::move(rec));
    out.selection.indices.push_back(best);
  }
  return out;
}

}  // namespace

std::string_view to_string(Variant v) { return v == Variant::kShared ? "shared" : "dedicated"; }

Variant parse_variant(std::string_view s) {
  if (s == "shared") return Variant::kShared;
  if (s == "dedicated") return Variant::kDedicated;
  throw ArgumentError("mode must be 'shared' or 'dedicated', got '" + std::string(s) + "'");
}

SelectionMode SelectionMode::with_ablation(Variant variant, std::string_view terms) {
  SelectionMode m;
  m.variant = variant;
  if (terms.empty() || terms == "all") return m;
  m.compact = m.discriminative = m.reconstructive = false;
  std::size_t pos = 0;
  while (pos <= terms.size()) {
    std::size_t end = terms.find(',', pos);
    if (end == std::string_view::npos) end = terms.size();
    std::string_view tok = terms.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok == "compact") m.compact = true;
    else if (tok == "discriminative") m.discriminative = true;
    else if (tok == "reconstructive") m.reconstructive = true;
    else throw ArgumentError("unknown ablation term '" + std::string(tok) + "'");
    pos = end + 1;
  }
  return m;
}

std::string SelectionMode::ablation() const {
  std::string s;
  auto add = [&](bool on, const char *name) {
    if (!on) return;
    if (!s.empty()) s += ',';
    s += name;
  };
  add(compact, "compact");
  add(discriminative, "discriminative");
  add(reconstructive, "reconstructive");
  return s;
}

void SelectionWeights::validate() const {
  if (lambda1 != 1.0) throw ArgumentError("lambda1 is fixed at 1");
  if (!(std::isfinite(lambda2) && lambda2 >= 0.0) || !(std::isfinite(lambda3) && lambda3 >= 0.0))
    throw ArgumentError("lambda2 and lambda3 must be finite and non-negative");
}

SelectionWeights estimate_lambdas(const Dictionary &dict, const SparseCodes &initial,
                                  const Labels &discrim_labels, const Matrix &recon_signals,
                                  const SelectionModels &models) {
  const Selection empty;
  const double compact = max_finite(gp_compact_gains(models.gp, empty));
  if (!(compact > 1e-12))
    throw NumericError("estimate_lambdas: compactness gains vanish (degenerate covariance)");
  const double discrim = max_finite(discrim_gains(initial.coeffs, discrim_labels, empty, models.kde));
  const double recon = max_finite(recon_gains(dict, empty, recon_signals, models.residual));
  SelectionWeights w;
  w.lambda2 = std::max(0.0, discrim) / compact;
  w.lambda3 = std::max(0.0, recon) / compact;
  return w;
}

SelectionResult select_shared(const Dictionary &dict, const Matrix &signals,
                              const Labels &labels, int sparsity, const SelectionMode &mode,
                              const SelectionWeights &weights, const SelectionModels &models,
                              const SparseCodes &initial) {
  if (signals.cols() != static_cast<Eigen::Index>(labels.size()) ||
      initial.coeffs.cols() != signals.cols())
    throw ArgumentError("select_shared: signals, labels and codes disagree in size");
  SelectionResult out = greedy_select(dict, initial.coeffs, labels, signals, sparsity, mode,
                                      weights, models);
  auto coded = code_ls(dict, out.selection, signals);
  out.codes = std::move(coded.codes);
  out.codes.sparsity = sparsity;
  out.reconstruction = std::move(coded.reconstruction);
  return out;
}

std::vector<SelectionResult> select_dedicated(const Dictionary &dict, const Matrix &signals,
                                              const Labels &labels, int sparsity,
                                              const SelectionMode &mode,
                                              const SelectionModels &models,
                                              const SparseCodes &initial,
                                              const WeightOverrides &overrides) {
  if (signals.cols() != static_cast<Eigen::Index>(labels.size()) ||
      initial.coeffs.cols() != signals.cols())
    throw ArgumentError("select_dedicated: signals, labels and codes disagree in size");
  int p = 0;
  for (int l : labels) p = std::max(p, l + 1);
  std::vector<SelectionResult> results;
  for (int c = 0; c < p; ++c) {
    Labels binary = binary_labels(labels, c);
    std::vector<int> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) members.push_back(static_cast<int>(i));
    if (members.size() < 2)
      throw ArgumentError("select_dedicated: class " + std::to_string(c) +
                          " has fewer than 2 samples");
    Matrix yc(signals.rows(), static_cast<Eigen::Index>(members.size()));
    for (std::size_t j = 0; j < members.size(); ++j) yc.col(static_cast<Eigen::Index>(j)) = signals.col(members[j]);

    SelectionWeights w;
    if (!overrides.lambda2 || !overrides.lambda3) w = estimate_lambdas(dict, initial, binary, yc, models);
    if (overrides.lambda2) w.lambda2 = *overrides.lambda2;
    if (overrides.lambda3) w.lambda3 = *overrides.lambda3;

    SelectionResult r = greedy_select(dict, initial.coeffs, binary, yc, sparsity, mode, w, models);
    r.class_id = c;
    auto coded = code_ls(dict, r.selection, yc);
    r.codes = std::move(coded.codes);
    r.codes.sparsity = sparsity;
    r.reconstruction = std::move(coded.reconstruction);
    results.push_back(std::move(r));
  }
  return results;
}

std::string selection_report_json(const std::vector<SelectionResult> &results,
                                  const SelectionMode &mode) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["mode"] = std::string(to_string(mode.variant));
  doc["ablation"] = mode.ablation();
  ordered_json sels = ordered_json::array();
  for (const auto &r : results) {
    ordered_json s;
    s["class"] = r.class_id;
    s["lambda1"] = r.weights.lambda1;
    s["lambda2"] = r.weights.lambda2;
    s["lambda3"] = r.weights.lambda3;
    s["indices"] = r.selection.indices;
    ordered_json rounds = ordered_json::array();
    for (std::size_t t = 0; t < r.rounds.size(); ++t) {
      const auto &rec = r.rounds[t];
      ordered_json j;
      j["round"] = t + 1;
      j["index"] = rec.index;
      j["compact_gain"] = rec.compact_gain;
      j["discrim_gain"] = rec.discrim_gain;
      j["recon_gain"] = rec.recon_gain;
      j["weighted_compact"] = mode.compact ? r.weights.lambda1 * rec.compact_gain : 0.0;
      j["weighted_discrim"] = mode.discriminative ? r.weights.lambda2 * rec.discrim_gain : 0.0;
      j["weighted_recon"] = mode.reconstructive ? r.weights.lambda3 * rec.recon_gain : 0.0;
      j["total"] = rec.total;
      rounds.push_back(std::move(j));
    }
    s["rounds"] = std::move(rounds);
    sels.push_back(std::move(s));
  }
  doc["selections"] = std::move(sels);
  return doc.dump(2) + "\n";
}

}  // namespace itdl
