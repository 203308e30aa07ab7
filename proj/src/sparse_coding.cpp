// src/sparse_coding.cpp

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

#include "itdl/sparse_coding.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "itdl/error.hpp"
#include "itdl/random.hpp"

namespace itdl {

Dictionary::Dictionary(Matrix atoms) : atoms_(std::move(atoms)) {
  if (atoms_.rows() < 1 || atoms_.cols() < 1)
    throw ArgumentError("dictionary must have n >= 1 and K >= 1");
  for (Eigen::Index k = 0; k < atoms_.cols(); ++k) {
    double norm = atoms_.col(k).norm();
    if (!(std::abs(norm - 1.0) <= kNormTolerance))
      throw ArgumentError("atom " + std::to_string(k) + " is not unit norm (" +
                          std::to_string(norm) + ")");
  }
}

Dictionary Dictionary::normalized(Matrix raw) {
  for (Eigen::Index k = 0; k < raw.cols(); ++k) {
    double norm = raw.col(k).norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw ArgumentError("cannot normalize atom " + std::to_string(k));
    raw.col(k) /= norm;
  }
  return Dictionary(std::move(raw));
}

bool Selection::contains(int k) const {
  return std::find(indices.begin(), indices.end(), k) != indices.end();
}

void Selection::validate(int parent_size) const {
  std::vector<bool> seen(static_cast<std::size_t>(std::max(parent_size, 0)), false);
  for (int k : indices) {
    if (k < 0 || k >= parent_size)
      throw ArgumentError("selection index " + std::to_string(k) + " outside [0, " +
                          std::to_string(parent_size) + ")");
    if (seen[k]) throw ArgumentError("selection repeats index " + std::to_string(k));
    seen[k] = true;
  }
}

Matrix gather_atoms(const Dictionary &dict, const Selection &sel) {
  sel.validate(dict.size());
  Matrix out(dict.dim(), sel.size());
  for (int t = 0; t < sel.size(); ++t) out.col(t) = dict.atom(sel.indices[t]);
  return out;
}

Matrix pinv(const Matrix &a) {
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector &s = svd.singularValues();
  const double cutoff = 1e-10 * s(0);
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

namespace {

void check_sparsity(const Dictionary &dict, int sparsity, const char *who) {
  if (sparsity < 1 || sparsity > std::min(dict.dim(), dict.size()))
    throw ArgumentError(std::string(who) + ": sparsity must lie in [1, min(n, K)]");
}

// Index of the largest score among atoms not yet taken; lowest index wins ties.
int argmax_free(const Vector &scores, const std::vector<bool> &taken) {
  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < scores.size(); ++k) {
    if (taken[k]) continue;
    if (best < 0 || scores(k) > best_score) {
      best = static_cast<int>(k);
      best_score = scores(k);
    }
  }
  return best;
}

}  // namespace

Vector omp(const Dictionary &dict, const Vector &y, int sparsity,
           std::vector<int> *support) {
  check_sparsity(dict, sparsity, "omp");
  if (y.size() != dict.dim()) throw ArgumentError("omp: signal dimension mismatch");
  Vector x = Vector::Zero(dict.size());
  if (support) support->clear();
  const double y_norm = y.norm();
  if (y_norm == 0.0) return x;

  std::vector<bool> taken(static_cast<std::size_t>(dict.size()), false);
  std::vector<int> chosen;
  Matrix sub(dict.dim(), 0);
  Vector coef;
  Vector r = y;
  for (int t = 0; t < sparsity; ++t) {
    Vector corr = (dict.atoms().transpose() * r).cwiseAbs();
    int k = argmax_free(corr, taken);
    if (k < 0 || corr(k) <= 1e-14 * y_norm) break;
    taken[k] = true;
    chosen.push_back(k);
    sub.conservativeResize(Eigen::NoChange, sub.cols() + 1);
    sub.col(sub.cols() - 1) = dict.atom(k);
    coef = pinv(sub) * y;
    r = y - sub * coef;
  }
  for (std::size_t t = 0; t < chosen.size(); ++t) x(chosen[t]) = coef(static_cast<Eigen::Index>(t));
  if (support) *support = chosen;
  return x;
}

SparseCodes omp_batch(const Dictionary &dict, const Matrix &signals, int sparsity) {
  check_sparsity(dict, sparsity, "omp");
  SparseCodes out{Matrix::Zero(dict.size(), signals.cols()), sparsity};
  for (Eigen::Index i = 0; i < signals.cols(); ++i)
    out.coeffs.col(i) = omp(dict, signals.col(i), sparsity);
  return out;
}

SompResult somp(const Dictionary &dict, const Matrix &signals, int sparsity) {
  check_sparsity(dict, sparsity, "somp");
  if (signals.rows() != dict.dim()) throw ArgumentError("somp: signal dimension mismatch");
  std::vector<bool> taken(static_cast<std::size_t>(dict.size()), false);
  SompResult out;
  Matrix sub(dict.dim(), 0);
  Matrix residual = signals;
  for (int t = 0; t < sparsity; ++t) {
    Vector score = (dict.atoms().transpose() * residual).cwiseAbs().rowwise().sum();
    int k = argmax_free(score, taken);
    taken[k] = true;
    out.selection.indices.push_back(k);
    sub.conservativeResize(Eigen::NoChange, sub.cols() + 1);
    sub.col(sub.cols() - 1) = dict.atom(k);
    residual = signals - sub * (pinv(sub) * signals);
  }
  out.codes = {pinv(sub) * signals, sparsity};
  return out;
}

KsvdResult ksvd_train(const Matrix &signals, int atoms, int sparsity, int iters,
                      std::uint64_t seed) {
  const int n = static_cast<int>(signals.rows());
  const int N = static_cast<int>(signals.cols());
  if (atoms < 1 || atoms > N) throw ArgumentError("ksvd: need 1 <= K <= N");
  if (iters < 1) throw ArgumentError("ksvd: iters must be >= 1");
  if (sparsity < 1 || sparsity > std::min(n, atoms))
    throw ArgumentError("ksvd: sparsity must lie in [1, min(n, K)]");

  // Initial atoms: K distinct training signals, normalized.
  Rng rng = substream(seed, "ksvd");
  std::vector<int> order(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) order[i] = i;
  shuffle(order.begin(), order.end(), rng);
  Matrix d(n, atoms);
  for (int k = 0; k < atoms; ++k) {
    Vector v = signals.col(order[k]);
    while (v.norm() == 0.0)
      for (int i = 0; i < n; ++i) v(i) = standard_normal(rng);
    d.col(k) = v / v.norm();
  }

  KsvdResult result;
  Matrix x;
  for (int it = 0; it < iters; ++it) {
    Dictionary dict(d);
    Matrix fresh = omp_batch(dict, signals, sparsity).coeffs;
    if (x.size() == 0) {
      x = std::move(fresh);
    } else {
      // Keep whichever code represents each signal better; OMP alone can
      // regress relative to the SVD-refined coefficients.
      for (int i = 0; i < N; ++i) {
        double old_err = (signals.col(i) - d * x.col(i)).squaredNorm();
        double new_err = (signals.col(i) - d * fresh.col(i)).squaredNorm();
        if (new_err <= old_err) x.col(i) = fresh.col(i);
      }
    }

    std::vector<bool> used_as_replacement(static_cast<std::size_t>(N), false);
    for (int k = 0; k < atoms; ++k) {
      std::vector<int> omega;
      for (int i = 0; i < N; ++i)
        if (x(k, i) != 0.0) omega.push_back(i);
      if (omega.empty()) {
        // Replace with the worst-represented signal not already used.
        Vector err = (signals - d * x).colwise().squaredNorm().transpose();
        int worst = -1;
        for (int i = 0; i < N; ++i) {
          if (used_as_replacement[i] || signals.col(i).norm() == 0.0) continue;
          if (worst < 0 || err(i) > err(worst)) worst = i;
        }
        if (worst >= 0) {
          used_as_replacement[worst] = true;
          d.col(k) = signals.col(worst) / signals.col(worst).norm();
        }
        continue;
      }
      const auto m = static_cast<Eigen::Index>(omega.size());
      Matrix e(n, m);
      for (Eigen::Index j = 0; j < m; ++j) {
        int i = omega[j];
        e.col(j) = signals.col(i) - d * x.col(i) + d.col(k) * x(k, i);
      }
      Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Vector u = svd.matrixU().col(0);
      double s = svd.singularValues()(0);
      double un = u.norm();
      d.col(k) = u / un;
      for (Eigen::Index j = 0; j < m; ++j) x(k, omega[j]) = s * un * svd.matrixV()(j, 0);
    }
    result.objective.push_back((signals - d * x).squaredNorm());
  }
  result.dictionary = Dictionary(d);
  result.codes = {std::move(x), sparsity};
  return result;
}

Dictionary ksvd_init(const Matrix &signals, int atoms, int sparsity, int iters,
                     std::uint64_t seed) {
  return ksvd_train(signals, atoms, sparsity, iters, seed).dictionary;
}

LeastSquaresCoding code_ls(const Matrix &atoms, const Matrix &signals) {
  if (atoms.rows() != signals.rows()) throw ArgumentError("code_ls: dimension mismatch");
  if (atoms.cols() > atoms.rows())
    std::clog << "warning: code_ls with " << atoms.cols() << " atoms in dimension "
              << atoms.rows() << "; using the least-norm solution\n";
  LeastSquaresCoding out;
  out.codes = {pinv(atoms) * signals, 0};
  out.reconstruction = atoms * out.codes.coeffs;
  return out;
}

LeastSquaresCoding code_ls(const Dictionary &dict, const Selection &sel,
                           const Matrix &signals) {
  return code_ls(gather_atoms(dict, sel), signals);
}

double rmse(const Matrix &signals, const Matrix &reconstruction) {
  if (signals.size() == 0) return 0.0;
  return (signals - reconstruction).norm() /
         std::sqrt(static_cast<double>(signals.rows()) * static_cast<double>(signals.cols()));
}

}  // namespace itdl
