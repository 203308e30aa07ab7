// include/itdl/itdu.hpp

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

#ifndef ITDL_ITDU_HPP_
#define ITDL_ITDU_HPP_

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "itdl/dataset.hpp"
#include "itdl/error.hpp"
#include "itdl/itds.hpp"

namespace itdl {

struct UpdateOptions {
  /// Ascent step. The gradient is taken on I_Q / I_Q(Phi_1), so the step is
  /// independent of the overall scale of the signals.
  double step = 0.05;
  int max_iters = 100;
  double tol = 1e-6;  ///< relative I_Q change that counts as converged
  bool backtracking = true;
  int max_halvings = 30;
  /// Fixed KDE bandwidth; by default derived once from the initial codes.
  std::optional<double> sigma;
};

struct IterationRecord {
  int iteration = 0;
  double iq = 0.0;         ///< I_Q after the step
  double step = 0.0;       ///< accepted step
  double grad_norm = 0.0;  ///< Frobenius norm of dI_Q/dPhi before the step
};

/// Ascent state on Phi = pinv(D)^T.
struct UpdateState {
  Matrix phi;
  double step = 0.0;  ///< configured step
  int iteration = 0;
  std::vector<double> trace;  ///< I_Q at Phi_1 followed by each iterate
  bool converged = false;
  double sigma = 0.0;            ///< bandwidth, frozen for the run
  double objective_scale = 1.0;  ///< 1 / I_Q(Phi_1)
  int max_halvings = 30;
  std::vector<IterationRecord> records;
};

struct UpdateResult {
  Matrix atoms;  ///< n x T, unit-norm columns
  Matrix codes;  ///< pinv(atoms) * signals
  UpdateState state;
};

/// Thrown when I_Q or its gradient stops being finite. Carries the last
/// finite iterate.
class UpdateAborted : public NumericError {
 public:
  UpdateAborted(const std::string &what, UpdateResult last)
      : NumericError(what), last_(std::move(last)) {}
  const UpdateResult &last() const { return last_; }

 private:
  UpdateResult last_;
};

using PhiObjective = std::function<double(const Matrix &)>;

/// Tries step, step/2, ... (max_halvings halvings) and returns the first
/// step with objective(phi + step * direction) >= current, or 0 when none
/// qualifies. `value`, when given, receives the objective at the accepted
/// point.
double backtrack_step(const PhiObjective &objective, const Matrix &phi, const Matrix &direction,
                      double step, double current, int max_halvings,
                      double *value = nullptr);

/// Backtracking on I_Q with the state's frozen bandwidth, recoding through
/// D = pinv(Phi^T) and X = pinv(D) Y. Sets `converged` when it returns 0.
double backtrack_step(UpdateState &state, const Matrix &direction, const Matrix &signals,
                      const Labels &labels);

/// Gradient ascent of I_Q(X, labels) over Phi starting from
/// Phi_1 = pinv(selected_atoms)^T. Each accepted step recovers
/// D = pinv(Phi^T) and recodes X = pinv(D) Y. Final atoms are rescaled to
/// unit norm with the codes rescaled inversely.
UpdateResult update_dictionary(const Matrix &selected_atoms, const Matrix &signals,
                               const Labels &labels, const UpdateOptions &options);

struct ClassUpdate {
  int class_id = -1;  ///< -1 for shared atoms
  UpdateResult update;
  Matrix codes;           ///< X_c = pinv(D_c) Y_c (all signals when shared)
  Matrix reconstruction;  ///< D_c X_c
};

/// Shared variant: one run with the global labels. Dedicated: one run per
/// class with binary labels over all signals.
std::vector<ClassUpdate> update_all_classes(const std::vector<Matrix> &selected_atoms,
                                            const Matrix &signals, const Labels &labels,
                                            Variant variant, const UpdateOptions &options);

/// JSON text with per-iteration I_Q, accepted step and gradient norm.
std::string update_report_json(const std::vector<ClassUpdate> &updates, Variant variant);

}  // namespace itdl

#endif  // ITDL_ITDU_HPP_
