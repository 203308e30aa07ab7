// include/itdl/info_measures.hpp

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

#ifndef ITDL_INFO_MEASURES_HPP_
#define ITDL_INFO_MEASURES_HPP_

#include <span>
#include <vector>

#include "itdl/dataset.hpp"
#include "itdl/sparse_coding.hpp"

namespace itdl {

// All entropies and information quantities are in nats.

/// Isotropic Gaussian KDE bandwidth. With `automatic` set the bandwidth is
/// derived from the codes being scored (see auto_bandwidth).
struct KdeConfig {
  double sigma = 1.0;
  bool automatic = true;

  double resolve(const Matrix &codes) const;
};

/// median pairwise distance * N^(-1/(d+4)), floored at 1e-3.
/// `codes` is d x N.
double auto_bandwidth(const Matrix &codes);

/// (2 pi sigma2)^(-d/2) exp(-|x|^2 / (2 sigma2)), d = x.size().
double gauss_kernel(const Vector &x, double sigma2);
double gauss_kernel_sqdist(double sq_dist, int dim, double sigma2);

/// (1/N_c) sum_j K(x - x_j^c, sigma^2 I) over the columns of class c.
double kde_class_density(const Matrix &codes, const Labels &labels, int c,
                         const Vector &x, double sigma);
/// Mixture density (1/N) sum_i K(x - x_i, sigma^2 I).
double kde_density(const Matrix &codes, const Vector &x, double sigma);

/// Empirical label entropy H(C) = -sum_c p(c) log p(c), p(c) = N_c / N.
double class_entropy(const Labels &labels);

/// Resubstitution estimate of I(X; C) = H(X) - sum_c p(c) H(X|c) using KDE
/// densities; clamped at 0. Zero-row codes carry no information.
double mi_codes_labels(const Matrix &codes, const Labels &labels, const KdeConfig &cfg);

/// Gaussian-process model over the atoms of the initial dictionary, used for
/// the compactness term I(D*; D0 \ D*).
class GpModel {
 public:
  static constexpr double kDefaultJitter = 1e-8;
  /// Conditional variances (jitter-free) below this mark an atom as fully
  /// explained by the selected atoms.
  static constexpr double kExplainedVariance = 1e-12;

  /// Throws NumericError unless `cov` is symmetric (1e-12) and
  /// cov + jitter I admits a Cholesky factorization.
  explicit GpModel(Matrix cov, double jitter = kDefaultJitter);

  /// Squared-exponential covariance exp(-|d_i - d_j|^2 / (2 rho^2)). A
  /// non-positive `rho` means the median pairwise atom distance.
  static GpModel from_dictionary(const Dictionary &dict, double rho = 0.0,
                                 double jitter = kDefaultJitter);

  const Matrix &cov() const { return cov_; }
  double jitter() const { return jitter_; }
  int size() const { return static_cast<int>(cov_.rows()); }

  /// var(a | given) under the jittered covariance cov + jitter I.
  double conditional_variance(int a, const std::vector<int> &given) const;
  /// Same, with the raw covariance and a pseudoinverse solve.
  double explained_residual(int a, const std::vector<int> &given) const;

 private:
  Matrix cov_;
  double jitter_;
};

/// Marginal gain of `candidate` for I(S; V \ S):
///   1/2 log( var(a | S) / var(a | V \ (S u {a})) ).
/// Returns -infinity when the candidate is already explained by S.
double gp_compact_gain(const GpModel &model, const Selection &selected, int candidate);
/// Gains for every atom; selected atoms get NaN. One factorization per call.
std::vector<double> gp_compact_gains(const GpModel &model, const Selection &selected);

/// Gaussian residual model y = D x + r, r ~ N(0, sigma_r^2 I).
struct ResidualModel {
  double sigma_r = 1.0;

  /// sigma_r = 0.1 * mean column norm of `signals`.
  static ResidualModel from_signals(const Matrix &signals);
};

/// Decrease in total negative log-likelihood of `signals` when `candidate`
/// joins the selected atoms (least squares coefficients on each support):
///   (1 / (2 sigma_r^2)) sum_i (|y_i - P_S y_i|^2 - |y_i - P_{S+a} y_i|^2).
double recon_gain(const Dictionary &dict, const Selection &selected, int candidate,
                  const Matrix &signals, const ResidualModel &model);
/// Gains for every atom (selected atoms get NaN).
std::vector<double> recon_gains(const Dictionary &dict, const Selection &selected,
                                const Matrix &signals, const ResidualModel &model);

/// Quadratic mutual information between codes (d x N) and labels, closed
/// form over Gaussian kernels of covariance 2 sigma^2 I:
///   V_in - 2 V_btw + V_all.
double qmi(const Matrix &codes, const Labels &labels, double sigma);
/// dI_Q / dx_i for every column, d x N.
Matrix qmi_grad_codes(const Matrix &codes, const Labels &labels, double sigma);
/// dI_Q / dx_i for sample i of class c (c must equal labels[i]).
Vector qmi_grad_x(const Matrix &codes, const Labels &labels, int i, int c, double sigma);
/// dI_Q / dPhi for codes X = Phi^T Y; same shape as phi (n x T).
Matrix qmi_grad_phi(const Matrix &phi, const Matrix &signals, const Labels &labels,
                    double sigma);

/// Upper bound on the Bayes error: (H(C) - I(X;C)) / 2, clamped at 0.
double bayes_bound(double class_entropy, double mutual_information);

struct Divergences {
  double kl;  ///< D(p||q), +infinity when q lacks support of p
  double qd;  ///< sum_t (p_t - q_t)^2
};
Divergences kl_qd_check(std::span<const double> p, std::span<const double> q);

}  // namespace itdl

#endif  // ITDL_INFO_MEASURES_HPP_
