// src/info_measures.cpp

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

#include "itdl/info_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "itdl/error.hpp"

namespace itdl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> count_classes(const Labels &labels) {
  int p = 0;
  for (int l : labels) {
    if (l < 0) throw ArgumentError("negative label");
    p = std::max(p, l + 1);
  }
  std::vector<int> counts(static_cast<std::size_t>(p), 0);
  for (int l : labels) ++counts[l];
  return counts;
}

void check_labels(const Matrix &codes, const Labels &labels) {
  if (static_cast<Eigen::Index>(labels.size()) != codes.cols())
    throw ArgumentError("label count does not match code columns");
}

// Pairwise squared distances between columns.
Matrix pairwise_sqdist(const Matrix &x) {
  const Eigen::Index n = x.cols();
  Matrix d2 = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = (x.col(i) - x.col(j)).squaredNorm();
      d2(i, j) = v;
      d2(j, i) = v;
    }
  return d2;
}

}  // namespace

double auto_bandwidth(const Matrix &codes) {
  constexpr double kFloor = 1e-3;
  const Eigen::Index n = codes.cols();
  if (n < 2 || codes.rows() == 0) return kFloor;
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) dist.push_back((codes.col(i) - codes.col(j)).norm());
  auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  double median = *mid;
  if (dist.size() % 2 == 0) {
    double lower = *std::max_element(dist.begin(), mid);
    median = 0.5 * (median + lower);
  }
  const double d = static_cast<double>(codes.rows());
  return std::max(kFloor, median * std::pow(static_cast<double>(n), -1.0 / (d + 4.0)));
}

double KdeConfig::resolve(const Matrix &codes) const {
  if (automatic) return auto_bandwidth(codes);
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ArgumentError("KDE bandwidth must be positive");
  return sigma;
}

double gauss_kernel_sqdist(double sq_dist, int dim, double sigma2) {
  if (!(sigma2 > 0.0)) throw ArgumentError("kernel variance must be positive");
  return std::pow(2.0 * std::numbers::pi * sigma2, -0.5 * dim) * std::exp(-sq_dist / (2.0 * sigma2));
}

double gauss_kernel(const Vector &x, double sigma2) {
  return gauss_kernel_sqdist(x.squaredNorm(), static_cast<int>(x.size()), sigma2);
}

double kde_class_density(const Matrix &codes, const Labels &labels, int c,
                         const Vector &x, double sigma) {
  check_labels(codes, labels);
  const double s2 = sigma * sigma;
  const int d = static_cast<int>(codes.rows());
  double sum = 0.0;
  int nc = 0;
  for (Eigen::Index j = 0; j < codes.cols(); ++j) {
    if (labels[j] != c) continue;
    sum += gauss_kernel_sqdist((x - codes.col(j)).squaredNorm(), d, s2);
    ++nc;
  }
  if (nc == 0) throw ArgumentError("kde_class_density: class " + std::to_string(c) + " is empty");
  return sum / nc;
}

double kde_density(const Matrix &codes, const Vector &x, double sigma) {
  if (codes.cols() == 0) throw ArgumentError("kde_density: no samples");
  const double s2 = sigma * sigma;
  const int d = static_cast<int>(codes.rows());
  double sum = 0.0;
  for (Eigen::Index j = 0; j < codes.cols(); ++j)
    sum += gauss_kernel_sqdist((x - codes.col(j)).squaredNorm(), d, s2);
  return sum / static_cast<double>(codes.cols());
}

double class_entropy(const Labels &labels) {
  auto counts = count_classes(labels);
  const double n = static_cast<double>(labels.size());
  double h = 0.0;
  for (int c : counts)
    if (c > 0) h -= (c / n) * std::log(c / n);
  return h;
}

double mi_codes_labels(const Matrix &codes, const Labels &labels, const KdeConfig &cfg) {
  check_labels(codes, labels);
  const Eigen::Index n = codes.cols();
  if (codes.rows() == 0 || n == 0) return 0.0;
  const double sigma = cfg.resolve(codes);
  auto counts = count_classes(labels);
  // The kernel normalization cancels between H(X) and H(X|C), so only the
  // exponentials are accumulated.
  const Matrix d2 = pairwise_sqdist(codes);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double all = 0.0, same = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      double k = std::exp(-d2(i, j) * inv);
      all += k;
      if (labels[j] == labels[i]) same += k;
    }
    acc += std::log(same / counts[labels[i]]) - std::log(all / static_cast<double>(n));
  }
  return std::max(0.0, acc / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Gaussian-process compactness

GpModel::GpModel(Matrix cov, double jitter) : cov_(std::move(cov)), jitter_(jitter) {
  if (cov_.rows() != cov_.cols() || cov_.rows() < 1)
    throw NumericError("GP covariance must be a non-empty square matrix");
  if (!(jitter_ >= 0.0)) throw NumericError("GP jitter must be non-negative");
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw NumericError("GP covariance is not symmetric");
  Matrix shifted = cov_;
  shifted.diagonal().array() += jitter_;
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success)
    throw NumericError("GP covariance is not positive definite after jitter");
}

GpModel GpModel::from_dictionary(const Dictionary &dict, double rho, double jitter) {
  const int k = dict.size();
  Matrix d2 = pairwise_sqdist(dict.atoms());
  if (!(rho > 0.0)) {
    std::vector<double> dist;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) dist.push_back(std::sqrt(d2(i, j)));
    if (dist.empty()) {
      rho = 1.0;
    } else {
      auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
      std::nth_element(dist.begin(), mid, dist.end());
      rho = *mid;
      if (dist.size() % 2 == 0) rho = 0.5 * (rho + *std::max_element(dist.begin(), mid));
    }
    if (!(rho > 0.0)) throw NumericError("all atoms coincide; GP length scale is zero");
  }
  Matrix cov = (-d2 / (2.0 * rho * rho)).array().exp().matrix();
  return GpModel(std::move(cov), jitter);
}

namespace {

Matrix sub_block(const Matrix &m, const std::vector<int> &rows, const std::vector<int> &cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

void check_candidate(const GpModel &model, const Selection &selected, int candidate) {
  selected.validate(model.size());
  if (candidate < 0 || candidate >= model.size())
    throw ArgumentError("candidate atom out of range");
  if (selected.contains(candidate)) throw ArgumentError("candidate already selected");
}

}  // namespace

double GpModel::conditional_variance(int a, const std::vector<int> &given) const {
  double var = cov_(a, a) + jitter_;
  if (given.empty()) return var;
  Matrix kss = sub_block(cov_, given, given);
  kss.diagonal().array() += jitter_;
  Vector ksa = sub_block(cov_, given, {a});
  Eigen::LLT<Matrix> llt(kss);
  return var - ksa.dot(llt.solve(ksa));
}

double GpModel::explained_residual(int a, const std::vector<int> &given) const {
  if (given.empty()) return cov_(a, a);
  Matrix kss = sub_block(cov_, given, given);
  Vector ksa = sub_block(cov_, given, {a});
  return cov_(a, a) - ksa.dot(pinv(kss) * ksa);
}

double gp_compact_gain(const GpModel &model, const Selection &selected, int candidate) {
  check_candidate(model, selected, candidate);
  const int k = model.size();
  std::vector<int> rest;
  for (int j = 0; j < k; ++j)
    if (j != candidate && !selected.contains(j)) rest.push_back(j);
  if (rest.empty()) throw ArgumentError("gp_compact_gain: complement of the selection is empty");
  if (model.explained_residual(candidate, selected.indices) < GpModel::kExplainedVariance)
    return -kInf;
  double num = model.conditional_variance(candidate, selected.indices);
  double den = model.conditional_variance(candidate, rest);
  return 0.5 * std::log(num / den);
}

std::vector<double> gp_compact_gains(const GpModel &model, const Selection &selected) {
  selected.validate(model.size());
  const int k = model.size();
  std::vector<double> gains(static_cast<std::size_t>(k), kNaN);
  std::vector<int> free;
  for (int j = 0; j < k; ++j)
    if (!selected.contains(j)) free.push_back(j);
  if (free.size() < 2) throw ArgumentError("gp_compact_gains: complement of the selection is empty");

  // var(a | V \ (S u {a})) = 1 / [(K_FF + jitter I)^-1]_aa over free atoms F.
  Matrix kff = sub_block(model.cov(), free, free);
  kff.diagonal().array() += model.jitter();
  Eigen::LLT<Matrix> llt_free(kff);
  Matrix precision = llt_free.solve(Matrix::Identity(kff.rows(), kff.cols()));

  const auto &s = selected.indices;
  Matrix kss = sub_block(model.cov(), s, s);
  Matrix kss_pinv = pinv(kss);
  kss.diagonal().array() += model.jitter();
  Eigen::LLT<Matrix> llt_sel(kss);

  for (std::size_t f = 0; f < free.size(); ++f) {
    const int a = free[f];
    double num = model.cov()(a, a) + model.jitter();
    double raw = model.cov()(a, a);
    if (!s.empty()) {
      Vector ksa = sub_block(model.cov(), s, {a});
      num -= ksa.dot(llt_sel.solve(ksa));
      raw -= ksa.dot(kss_pinv * ksa);
    }
    if (raw < GpModel::kExplainedVariance) {
      gains[a] = -kInf;
      continue;
    }
    double den = 1.0 / precision(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(f));
    gains[a] = 0.5 * std::log(num / den);
  }
  return gains;
}

// ---------------------------------------------------------------------------
// Reconstruction

ResidualModel ResidualModel::from_signals(const Matrix &signals) {
  if (signals.cols() == 0) throw ArgumentError("residual model needs signals");
  double mean_norm = signals.colwise().norm().mean();
  if (!(mean_norm > 0.0)) throw NumericError("signals are all zero");
  return {0.1 * mean_norm};
}

double recon_gain(const Dictionary &dict, const Selection &selected, int candidate,
                  const Matrix &signals, const ResidualModel &model) {
  selected.validate(dict.size());
  if (candidate < 0 || candidate >= dict.size() || selected.contains(candidate))
    throw ArgumentError("recon_gain: invalid candidate");
  if (signals.rows() != dict.dim()) throw ArgumentError("recon_gain: dimension mismatch");
  auto residual_energy = [&](const Matrix &atoms) {
    if (atoms.cols() == 0) return signals.squaredNorm();
    return (signals - atoms * (pinv(atoms) * signals)).squaredNorm();
  };
  Matrix before = gather_atoms(dict, selected);
  Matrix after(before.rows(), before.cols() + 1);
  after << before, dict.atom(candidate);
  const double s2 = model.sigma_r * model.sigma_r;
  return (residual_energy(before) - residual_energy(after)) / (2.0 * s2);
}

std::vector<double> recon_gains(const Dictionary &dict, const Selection &selected,
                                const Matrix &signals, const ResidualModel &model) {
  selected.validate(dict.size());
  if (signals.rows() != dict.dim()) throw ArgumentError("recon_gains: dimension mismatch");
  const int k = dict.size();
  std::vector<double> gains(static_cast<std::size_t>(k), kNaN);

  // Orthonormal basis of span(D_S) and the current residual.
  Matrix basis(dict.dim(), 0);
  if (selected.size() > 0) {
    Matrix ds = gather_atoms(dict, selected);
    Eigen::JacobiSVD<Matrix> svd(ds, Eigen::ComputeThinU);
    const Vector &sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > 1e-10 * sv(0)) ++rank;
    basis = svd.matrixU().leftCols(rank);
  }
  Matrix residual = signals - basis * (basis.transpose() * signals);
  const double scale = 1.0 / (2.0 * model.sigma_r * model.sigma_r);
  for (int a = 0; a < k; ++a) {
    if (selected.contains(a)) continue;
    Vector w = dict.atom(a) - basis * (basis.transpose() * dict.atom(a));
    double wn = w.norm();
    if (wn <= 1e-10) {
      gains[a] = 0.0;
      continue;
    }
    gains[a] = (residual.transpose() * (w / wn)).squaredNorm() * scale;
  }
  return gains;
}

// ---------------------------------------------------------------------------
// Quadratic mutual information

namespace {

struct QmiTerms {
  Matrix kernel;  // K(x_i - x_j, 2 sigma^2 I)
  std::vector<int> counts;
  double sum_p2 = 0.0;
};

QmiTerms qmi_terms(const Matrix &codes, const Labels &labels, double sigma) {
  check_labels(codes, labels);
  if (!(sigma > 0.0)) throw ArgumentError("qmi: sigma must be positive");
  QmiTerms t;
  t.counts = count_classes(labels);
  const double n = static_cast<double>(codes.cols());
  for (int c : t.counts) t.sum_p2 += (c / n) * (c / n);
  const double s2 = 2.0 * sigma * sigma;
  const int d = static_cast<int>(codes.rows());
  const double norm = std::pow(2.0 * std::numbers::pi * s2, -0.5 * d);
  t.kernel = (pairwise_sqdist(codes) * (-1.0 / (2.0 * s2))).array().exp().matrix() * norm;
  return t;
}

}  // namespace

double qmi(const Matrix &codes, const Labels &labels, double sigma) {
  if (codes.cols() == 0) return 0.0;
  QmiTerms t = qmi_terms(codes, labels, sigma);
  const Eigen::Index n = codes.cols();
  const double nd = static_cast<double>(n);
  double within = 0.0, between = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0, same = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      row += t.kernel(i, j);
      if (labels[j] == labels[i]) same += t.kernel(i, j);
    }
    within += same;
    between += (t.counts[labels[i]] / nd) * row;
    total += row;
  }
  return (within - 2.0 * between + t.sum_p2 * total) / (nd * nd);
}

Matrix qmi_grad_codes(const Matrix &codes, const Labels &labels, double sigma) {
  const Eigen::Index n = codes.cols();
  Matrix grad = Matrix::Zero(codes.rows(), n);
  if (n == 0) return grad;
  QmiTerms t = qmi_terms(codes, labels, sigma);
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / (nd * nd * sigma * sigma);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int ci = labels[i];
    Vector g = Vector::Zero(codes.rows());
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == i) continue;
      const int ck = labels[k];
      double w = (ck == ci ? 1.0 : 0.0) + t.sum_p2 - (t.counts[ci] + t.counts[ck]) / nd;
      g += (w * t.kernel(i, k)) * (codes.col(k) - codes.col(i));
    }
    grad.col(i) = scale * g;
  }
  return grad;
}

Vector qmi_grad_x(const Matrix &codes, const Labels &labels, int i, int c, double sigma) {
  check_labels(codes, labels);
  if (i < 0 || i >= codes.cols()) throw ArgumentError("qmi_grad_x: sample out of range");
  if (labels[i] != c) throw ArgumentError("qmi_grad_x: sample does not belong to class c");
  QmiTerms t = qmi_terms(codes, labels, sigma);
  const double nd = static_cast<double>(codes.cols());
  Vector g = Vector::Zero(codes.rows());
  for (Eigen::Index k = 0; k < codes.cols(); ++k) {
    if (k == i) continue;
    const int ck = labels[k];
    double w = (ck == c ? 1.0 : 0.0) + t.sum_p2 - (t.counts[c] + t.counts[ck]) / nd;
    g += (w * t.kernel(i, k)) * (codes.col(k) - codes.col(i));
  }
  return g / (nd * nd * sigma * sigma);
}

Matrix qmi_grad_phi(const Matrix &phi, const Matrix &signals, const Labels &labels,
                    double sigma) {
  if (phi.rows() != signals.rows()) throw ArgumentError("qmi_grad_phi: dimension mismatch");
  Matrix codes = phi.transpose() * signals;
  return signals * qmi_grad_codes(codes, labels, sigma).transpose();
}

// ---------------------------------------------------------------------------

double bayes_bound(double class_entropy, double mutual_information) {
  if (mutual_information > class_entropy + 1e-9)
    throw ArgumentError("bayes_bound: mutual information exceeds H(C)");
  return std::max(0.0, 0.5 * (class_entropy - mutual_information));
}

Divergences kl_qd_check(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty())
    throw ArgumentError("kl_qd_check: distributions need a common non-empty support");
  auto check = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
      if (!(x >= 0.0)) throw ArgumentError("kl_qd_check: negative probability");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-9) throw ArgumentError("kl_qd_check: probabilities must sum to 1");
  };
  check(p);
  check(q);
  Divergences out{0.0, 0.0};
  for (std::size_t t = 0; t < p.size(); ++t) {
    out.qd += (p[t] - q[t]) * (p[t] - q[t]);
    if (p[t] == 0.0) continue;
    if (q[t] == 0.0) {
      out.kl = kInf;
      continue;
    }
    if (std::isfinite(out.kl)) out.kl += p[t] * std::log(p[t] / q[t]);
  }
  return out;
}

}  // namespace itdl
