// src/itdu.cpp

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

#include "itdl/itdu.hpp"

#include <cmath>

#include <json.hpp>

#include "itdl/info_measures.hpp"
#include "itdl/sparse_coding.hpp"

namespace itdl {

namespace {

struct Iterate {
  Matrix atoms;
  Matrix codes;
};

Iterate recode(const Matrix &phi, const Matrix &signals) {
  Iterate it;
  it.atoms = pinv(phi.transpose());
  it.codes = pinv(it.atoms) * signals;
  return it;
}

bool all_finite(const Matrix &m) { return m.allFinite(); }

}  // namespace

double backtrack_step(const PhiObjective &objective, const Matrix &phi, const Matrix &direction,
                      double step, double current, int max_halvings, double *value) {
  double nu = step;
  for (int h = 0; h <= max_halvings; ++h, nu *= 0.5) {
    double v = objective(phi + nu * direction);
    if (std::isfinite(v) && v >= current) {
      if (value) *value = v;
      return nu;
    }
  }
  if (value) *value = current;
  return 0.0;
}

double backtrack_step(UpdateState &state, const Matrix &direction, const Matrix &signals,
                      const Labels &labels) {
  const double sigma = state.sigma;
  auto objective = [&](const Matrix &phi) { return qmi(recode(phi, signals).codes, labels, sigma); };
  const double current = state.trace.empty() ? objective(state.phi) : state.trace.back();
  double nu = backtrack_step(objective, state.phi, direction, state.step, current,
                             state.max_halvings);
  if (nu == 0.0) state.converged = true;
  return nu;
}

UpdateResult update_dictionary(const Matrix &selected_atoms, const Matrix &signals,
                               const Labels &labels, const UpdateOptions &options) {
  if (selected_atoms.rows() != signals.rows())
    throw ArgumentError("update_dictionary: dimension mismatch");
  if (selected_atoms.cols() > selected_atoms.rows())
    throw ArgumentError("update_dictionary: more atoms than signal dimensions");
  if (static_cast<Eigen::Index>(labels.size()) != signals.cols())
    throw ArgumentError("update_dictionary: label count mismatch");
  if (!(options.step >= 0.0) || options.max_iters < 0 || !(options.tol > 0.0))
    throw ArgumentError("update_dictionary: step >= 0, max_iters >= 0 and tol > 0 required");

  UpdateState state;
  state.phi = pinv(selected_atoms).transpose();
  state.step = options.step;
  state.max_halvings = options.backtracking ? options.max_halvings : 0;
  Iterate cur{selected_atoms, pinv(selected_atoms) * signals};
  state.sigma = options.sigma ? *options.sigma : auto_bandwidth(cur.codes);
  if (!(state.sigma > 0.0)) throw ArgumentError("update_dictionary: sigma must be positive");

  // Same recode path as every later iterate, so a zero step compares equal.
  double iq = qmi(recode(state.phi, signals).codes, labels, state.sigma);
  if (!std::isfinite(iq)) throw NumericError("update_dictionary: initial I_Q is not finite");
  state.trace.push_back(iq);
  state.objective_scale = iq > 0.0 ? 1.0 / iq : 1.0;
  bool moved = false;

  auto finish = [&](Iterate it) {
    UpdateResult r;
    if (moved) {
      Vector norms = it.atoms.colwise().norm().transpose();
      for (Eigen::Index k = 0; k < norms.size(); ++k) {
        if (norms(k) == 0.0) continue;
        it.atoms.col(k) /= norms(k);
        it.codes.row(k) *= norms(k);
      }
      state.phi = pinv(it.atoms).transpose();
    }
    r.atoms = std::move(it.atoms);
    r.codes = std::move(it.codes);
    r.state = state;
    return r;
  };

  for (int k = 0; k < options.max_iters; ++k) {
    Matrix grad = qmi_grad_phi(state.phi, signals, labels, state.sigma);
    if (!all_finite(grad))
      throw UpdateAborted("update_dictionary: gradient is not finite", finish(cur));
    Matrix direction = state.objective_scale * grad;

    double nu = options.step;
    double next_iq = iq;
    Matrix next_phi = state.phi;
    Iterate next = cur;
    if (options.backtracking) {
      nu = backtrack_step(state, direction, signals, labels);
      if (nu > 0.0) {
        next_phi = state.phi + nu * direction;
        next = recode(next_phi, signals);
        next_iq = qmi(next.codes, labels, state.sigma);
      }
    } else if (nu > 0.0) {
      next_phi = state.phi + nu * direction;
      next = recode(next_phi, signals);
      next_iq = qmi(next.codes, labels, state.sigma);
    }
    if (!std::isfinite(next_iq) || !all_finite(next.atoms))
      throw UpdateAborted("update_dictionary: I_Q is not finite", finish(cur));

    state.iteration = k + 1;
    state.records.push_back({k + 1, next_iq, nu, grad.norm()});
    state.trace.push_back(next_iq);
    if (nu > 0.0) {
      state.phi = std::move(next_phi);
      cur = std::move(next);
      moved = true;
    }
    const double change = std::abs(next_iq - iq) / std::max(std::abs(iq), 1e-300);
    iq = next_iq;
    if (state.converged || change < options.tol) {
      state.converged = true;
      break;
    }
  }
  return finish(std::move(cur));
}

std::vector<ClassUpdate> update_all_classes(const std::vector<Matrix> &selected_atoms,
                                            const Matrix &signals, const Labels &labels,
                                            Variant variant, const UpdateOptions &options) {
  std::vector<ClassUpdate> out;
  if (variant == Variant::kShared) {
    if (selected_atoms.size() != 1)
      throw ArgumentError("update_all_classes: shared mode takes exactly one dictionary");
    ClassUpdate cu;
    cu.update = update_dictionary(selected_atoms[0], signals, labels, options);
    auto coded = code_ls(cu.update.atoms, signals);
    cu.codes = std::move(coded.codes.coeffs);
    cu.reconstruction = std::move(coded.reconstruction);
    out.push_back(std::move(cu));
    return out;
  }
  for (std::size_t c = 0; c < selected_atoms.size(); ++c) {
    const int cls = static_cast<int>(c);
    Labels binary = binary_labels(labels, cls);
    ClassUpdate cu;
    cu.class_id = cls;
    try {
      cu.update = update_dictionary(selected_atoms[c], signals, binary, options);
    } catch (const UpdateAborted &e) {
      throw UpdateAborted("class " + std::to_string(cls) + ": " + e.what(), e.last());
    } catch (const std::exception &e) {
      throw NumericError("class " + std::to_string(cls) + ": " + e.what());
    }
    std::vector<int> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(static_cast<int>(i));
    Matrix yc(signals.rows(), static_cast<Eigen::Index>(members.size()));
    for (std::size_t j = 0; j < members.size(); ++j) yc.col(static_cast<Eigen::Index>(j)) = signals.col(members[j]);
    auto coded = code_ls(cu.update.atoms, yc);
    cu.codes = std::move(coded.codes.coeffs);
    cu.reconstruction = std::move(coded.reconstruction);
    out.push_back(std::move(cu));
  }
  return out;
}

std::string update_report_json(const std::vector<ClassUpdate> &updates, Variant variant) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["mode"] = std::string(to_string(variant));
  ordered_json runs = ordered_json::array();
  for (const auto &u : updates) {
    const auto &s = u.update.state;
    ordered_json r;
    r["class"] = u.class_id;
    r["sigma"] = s.sigma;
    r["step"] = s.step;
    r["iterations"] = s.iteration;
    r["converged"] = s.converged;
    r["initial_iq"] = s.trace.empty() ? 0.0 : s.trace.front();
    ordered_json iters = ordered_json::array();
    for (const auto &rec : s.records)
      iters.push_back({{"iteration", rec.iteration},
                       {"iq", rec.iq},
                       {"step", rec.step},
                       {"grad_norm", rec.grad_norm}});
    r["trace"] = std::move(iters);
    runs.push_back(std::move(r));
  }
  doc["updates"] = std::move(runs);
  return doc.dump(2) + "\n";
}

}  // namespace itdl
