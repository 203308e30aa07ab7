// src/classify.cpp

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

#include "itdl/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "itdl/error.hpp"
#include "itdl/info_measures.hpp"
#include "itdl/random.hpp"
#include "itdl/sparse_coding.hpp"

namespace itdl {

LinearModel train_linear(const Matrix &features, const Labels &labels, double reg, int epochs,
                         std::uint64_t seed) {
  const Eigen::Index f = features.rows();
  const Eigen::Index n = features.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw ArgumentError("train_linear: label count mismatch");
  if (!(reg > 0.0)) throw ArgumentError("train_linear: reg must be positive");
  if (epochs < 1) throw ArgumentError("train_linear: epochs must be >= 1");
  int p = 0;
  for (int l : labels) p = std::max(p, l + 1);
  std::vector<int> counts(static_cast<std::size_t>(p), 0);
  for (int l : labels) ++counts[l];
  if (std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) < 2)
    throw ArgumentError("train_linear: need at least two classes");

  // Visiting order, shared by every one-vs-rest problem.
  Rng rng = substream(seed, "sgd");
  std::vector<std::vector<int>> orders(static_cast<std::size_t>(epochs));
  for (auto &order : orders) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    shuffle(order.begin(), order.end(), rng);
  }

  // Train on standardized features and fold the affine map back in below.
  const Vector mean = features.rowwise().mean();
  Vector scale = ((features.colwise() - mean).rowwise().squaredNorm() / static_cast<double>(n))
                     .cwiseSqrt();
  for (Eigen::Index k = 0; k < f; ++k)
    if (!(scale(k) > 1e-12 * std::max(1.0, std::abs(mean(k))))) scale(k) = 1.0;
  const Matrix z = scale.cwiseInverse().asDiagonal() * (features.colwise() - mean);

  LinearModel model{Matrix::Zero(p, f), Vector::Zero(p)};
  for (int c = 0; c < p; ++c) {
    Vector w = Vector::Zero(f);
    double b = 0.0;
    long t = 0;
    for (const auto &order : orders) {
      for (int i : order) {
        ++t;
        const double eta = 1.0 / (reg * static_cast<double>(t));
        const double y = labels[i] == c ? 1.0 : -1.0;
        const double margin = y * (w.dot(z.col(i)) + b);
        const double shrink = 1.0 - eta * reg;
        w *= shrink;
        b *= shrink;
        if (margin < 1.0) {
          w += (eta * y) * z.col(i);
          b += eta * y;
        }
      }
    }
    const Vector w_raw = w.cwiseQuotient(scale);
    model.weights.row(c) = w_raw.transpose();
    model.bias(c) = b - w_raw.dot(mean);
  }
  return model;
}

Labels predict(const LinearModel &model, const Matrix &features) {
  if (features.rows() != model.weights.cols())
    throw ArgumentError("predict: feature dimension " + std::to_string(features.rows()) +
                        " does not match model dimension " +
                        std::to_string(model.weights.cols()));
  Matrix scores = model.weights * features;
  scores.colwise() += model.bias;
  Labels out(static_cast<std::size_t>(features.cols()));
  for (Eigen::Index j = 0; j < scores.cols(); ++j) {
    int best = 0;
    for (Eigen::Index c = 1; c < scores.rows(); ++c)
      if (scores(c, j) > scores(best, j)) best = static_cast<int>(c);
    out[j] = best;
  }
  return out;
}

Matrix build_features(const Matrix &shared_codes) { return shared_codes; }

Matrix build_features(const std::vector<Matrix> &per_class_codes) {
  if (per_class_codes.empty()) throw ArgumentError("build_features: no class selections");
  Eigen::Index rows = 0;
  const Eigen::Index n = per_class_codes.front().cols();
  for (std::size_t c = 0; c < per_class_codes.size(); ++c) {
    if (per_class_codes[c].size() == 0 && n != 0)
      throw ArgumentError("build_features: missing codes for class " + std::to_string(c));
    if (per_class_codes[c].cols() != n)
      throw ArgumentError("build_features: per-class codes cover different signals");
    rows += per_class_codes[c].rows();
  }
  Matrix out(rows, n);
  Eigen::Index at = 0;
  for (const auto &codes : per_class_codes) {
    out.middleRows(at, codes.rows()) = codes;
    at += codes.rows();
  }
  return out;
}

Matrix encode_features(const LearnedAtoms &learned, const Matrix &signals) {
  if (learned.atoms.empty()) throw ArgumentError("encode_features: no learned atoms");
  if (learned.variant == Variant::kShared) {
    if (learned.atoms.size() != 1)
      throw ArgumentError("encode_features: shared mode takes one dictionary");
    return build_features(code_ls(learned.atoms[0], signals).codes.coeffs);
  }
  std::vector<Matrix> per_class;
  for (const auto &atoms : learned.atoms) per_class.push_back(code_ls(atoms, signals).codes.coeffs);
  return build_features(per_class);
}

double accuracy(const Labels &truth, const Labels &predicted) {
  if (truth.size() != predicted.size()) throw ArgumentError("accuracy: size mismatch");
  if (truth.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["accuracy"] = accuracy;
  j["rmse"] = rmse;
  j["mi_estimate"] = mi_estimate;
  j["bayes_bound"] = bayes_bound;
  j["per_class_accuracy"] = per_class_accuracy;
  return j.dump(2) + "\n";
}

EvalReport evaluate(const LinearModel &model, const LearnedAtoms &learned, const Dataset &test) {
  const Matrix &y = test.signals();
  Matrix features = encode_features(learned, y);
  Labels pred = predict(model, features);

  EvalReport rep;
  const int p = test.num_classes();
  std::vector<int> hits(static_cast<std::size_t>(p), 0);
  int total_hits = 0;
  for (int i = 0; i < test.size(); ++i) {
    if (pred[i] == test.labels()[i]) {
      ++hits[test.labels()[i]];
      ++total_hits;
    }
  }
  rep.accuracy = static_cast<double>(total_hits) / test.size();
  for (int c = 0; c < p; ++c)
    rep.per_class_accuracy.push_back(static_cast<double>(hits[c]) / test.class_counts()[c]);

  if (learned.variant == Variant::kShared) {
    rep.rmse = rmse(y, code_ls(learned.atoms[0], y).reconstruction);
  } else {
    if (static_cast<int>(learned.atoms.size()) != p)
      throw ArgumentError("evaluate: need one dictionary per class");
    double sq = 0.0;
    for (int c = 0; c < p; ++c) {
      Matrix yc = test.class_signals(c);
      sq += (yc - code_ls(learned.atoms[c], yc).reconstruction).squaredNorm();
    }
    rep.rmse = std::sqrt(sq / (static_cast<double>(y.rows()) * static_cast<double>(y.cols())));
  }

  KdeConfig kde;
  rep.mi_estimate = mi_codes_labels(features, test.labels(), kde);
  const double h = class_entropy(test.labels());
  rep.bayes_bound = bayes_bound(h, std::min(rep.mi_estimate, h));
  return rep;
}

MaskedReconstruction reconstruct_masked(const std::vector<Matrix> &class_atoms,
                                        const Dataset &masked, const Mask &mask) {
  const Matrix &y = masked.signals();
  const Eigen::Index n = y.rows(), count = y.cols();
  if (mask.rows() != n || mask.cols() != count)
    throw ArgumentError("reconstruct_masked: mask shape does not match signals");
  if (class_atoms.empty()) throw ArgumentError("reconstruct_masked: no class dictionaries");
  const auto p = static_cast<Eigen::Index>(class_atoms.size());

  std::vector<int> full_cols, partial_cols;
  for (Eigen::Index j = 0; j < count; ++j)
    (mask.col(j).all() ? full_cols : partial_cols).push_back(static_cast<int>(j));

  MaskedReconstruction out;
  out.residuals = Matrix::Zero(p, count);
  std::vector<Matrix> recon(static_cast<std::size_t>(p), Matrix::Zero(n, count));

  Matrix y_full(n, static_cast<Eigen::Index>(full_cols.size()));
  for (std::size_t k = 0; k < full_cols.size(); ++k) y_full.col(static_cast<Eigen::Index>(k)) = y.col(full_cols[k]);

  for (Eigen::Index c = 0; c < p; ++c) {
    const Matrix &d = class_atoms[c];
    if (d.rows() != n) throw ArgumentError("reconstruct_masked: dictionary dimension mismatch");
    // Fully observed signals go through the ordinary least-squares path.
    if (!full_cols.empty()) {
      auto coded = code_ls(d, y_full);
      for (std::size_t k = 0; k < full_cols.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        recon[c].col(full_cols[k]) = coded.reconstruction.col(kk);
        out.residuals(c, full_cols[k]) = (y_full.col(kk) - coded.reconstruction.col(kk)).norm();
      }
    }
    for (int j : partial_cols) {
      std::vector<Eigen::Index> rows;
      for (Eigen::Index i = 0; i < n; ++i)
        if (mask(i, j)) rows.push_back(i);
      const auto m = static_cast<Eigen::Index>(rows.size());
      Matrix d_obs(m, d.cols());
      Vector y_obs(m);
      for (Eigen::Index r = 0; r < m; ++r) {
        d_obs.row(r) = d.row(rows[r]);
        y_obs(r) = y(rows[r], j);
      }
      Vector x = pinv(d_obs) * y_obs;
      out.residuals(c, j) = (y_obs - d_obs * x).norm();
      recon[c].col(j) = d * x;
    }
  }

  out.predicted.resize(static_cast<std::size_t>(count));
  out.reconstructions = Matrix::Zero(n, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < p; ++c)
      if (out.residuals(c, j) < out.residuals(best, j)) best = c;
    out.predicted[j] = static_cast<int>(best);
    out.reconstructions.col(j) = recon[best].col(j);
  }
  return out;
}

}  // namespace itdl
