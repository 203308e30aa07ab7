// include/itdl/sparse_coding.hpp

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

#ifndef ITDL_SPARSE_CODING_HPP_
#define ITDL_SPARSE_CODING_HPP_

#include <cstdint>
#include <vector>

#include "itdl/dataset.hpp"

namespace itdl {

/// n x K matrix of unit-norm atoms.
class Dictionary {
 public:
  static constexpr double kNormTolerance = 1e-10;

  Dictionary() = default;
  /// Throws ArgumentError unless every column has unit norm (within
  /// kNormTolerance) and the matrix is non-empty.
  explicit Dictionary(Matrix atoms);
  /// Normalizes the columns of `raw`; zero columns are an error.
  static Dictionary normalized(Matrix raw);

  const Matrix &atoms() const { return atoms_; }
  int dim() const { return static_cast<int>(atoms_.rows()); }
  int size() const { return static_cast<int>(atoms_.cols()); }
  auto atom(int k) const { return atoms_.col(k); }

 private:
  Matrix atoms_;
};

struct SparseCodes {
  Matrix coeffs;     ///< atoms x signals
  int sparsity = 0;  ///< max nonzeros per column, 0 = dense
};

/// Ordered atom indices into a parent dictionary, in greedy order.
struct Selection {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  bool contains(int k) const;
  /// Throws ArgumentError on duplicates or indices outside [0, K).
  void validate(int parent_size) const;
};

/// Columns of `dict` listed in `sel`, in selection order.
Matrix gather_atoms(const Dictionary &dict, const Selection &sel);

/// Moore-Penrose pseudoinverse via SVD. Singular values below
/// 1e-10 * (largest singular value) are treated as zero.
Matrix pinv(const Matrix &a);

/// Orthogonal matching pursuit. Picks argmax |d^T r| (lowest index on ties)
/// and refits all selected coefficients by least squares each step.
/// `support`, when given, receives the atoms in selection order.
Vector omp(const Dictionary &dict, const Vector &y, int sparsity,
           std::vector<int> *support = nullptr);
SparseCodes omp_batch(const Dictionary &dict, const Matrix &signals, int sparsity);

struct SompResult {
  Selection selection;
  SparseCodes codes;  ///< |selection| x N, least squares on the shared support
};

/// Simultaneous OMP: one support for all columns, chosen by
/// argmax sum_i |d^T r_i|.
SompResult somp(const Dictionary &dict, const Matrix &signals, int sparsity);

struct KsvdResult {
  Dictionary dictionary;
  SparseCodes codes;
  std::vector<double> objective;  ///< ||Y - DX||_F^2 after each sweep
};

KsvdResult ksvd_train(const Matrix &signals, int atoms, int sparsity, int iters,
                      std::uint64_t seed);
Dictionary ksvd_init(const Matrix &signals, int atoms, int sparsity, int iters,
                     std::uint64_t seed);

struct LeastSquaresCoding {
  SparseCodes codes;
  Matrix reconstruction;
};

/// X = pinv(D_sel) Y and Yhat = D_sel X.
LeastSquaresCoding code_ls(const Dictionary &dict, const Selection &sel,
                           const Matrix &signals);
LeastSquaresCoding code_ls(const Matrix &atoms, const Matrix &signals);

/// ||Y - Yhat||_F / sqrt(n N).
double rmse(const Matrix &signals, const Matrix &reconstruction);

}  // namespace itdl

#endif  // ITDL_SPARSE_CODING_HPP_
