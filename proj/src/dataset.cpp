// src/dataset.cpp

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

#include "itdl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_map>

#include "itdl/error.hpp"
#include "itdl/matrix_io.hpp"
#include "itdl/random.hpp"

namespace itdl {

Dataset::Dataset(Matrix signals, Labels labels, int num_classes)
    : signals_(std::move(signals)),
      labels_(std::move(labels)),
      num_classes_(num_classes),
      class_counts_(static_cast<std::size_t>(std::max(num_classes, 0)), 0) {
  if (num_classes_ < 1) throw ArgumentError("dataset needs at least one class");
  if (static_cast<Eigen::Index>(labels_.size()) != signals_.cols())
    throw ArgumentError("label count does not match signal count");
  for (int l : labels_) {
    if (l < 0 || l >= num_classes_)
      throw ArgumentError("label " + std::to_string(l) + " outside [0, " +
                          std::to_string(num_classes_) + ")");
    ++class_counts_[l];
  }
  for (int c = 0; c < num_classes_; ++c)
    if (class_counts_[c] == 0)
      throw ArgumentError("class " + std::to_string(c) + " has no samples");
}

std::vector<int> Dataset::members(int c) const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(class_counts_.at(c)));
  for (int i = 0; i < size(); ++i)
    if (labels_[i] == c) out.push_back(i);
  return out;
}

Dataset Dataset::subset(const std::vector<int> &cols) const {
  Matrix s(dim(), static_cast<Eigen::Index>(cols.size()));
  Labels l(cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    s.col(static_cast<Eigen::Index>(k)) = signals_.col(cols[k]);
    l[k] = labels_[cols[k]];
  }
  return Dataset(std::move(s), std::move(l), num_classes_);
}

Matrix Dataset::class_signals(int c) const {
  auto idx = members(c);
  Matrix s(dim(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) s.col(static_cast<Eigen::Index>(k)) = signals_.col(idx[k]);
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = line.find(',', pos);
    out.push_back(trim(line.substr(pos, end == std::string_view::npos ? end : end - pos)));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

}  // namespace

Dataset load_csv(const std::filesystem::path &path) { return load_csv(path, nullptr); }

Dataset load_csv(const std::filesystem::path &path, std::vector<long> *label_values) {
  const std::string text = read_file(path);
  std::vector<std::vector<double>> rows;
  std::vector<long> raw_labels;
  std::size_t width = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() < 2) throw LoadError("row needs a label and at least one feature", line_no);
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw LoadError("ragged row: expected " + std::to_string(width) + " fields, got " +
                          std::to_string(fields.size()),
                      line_no);
    long label = 0;
    {
      auto f = fields[0];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), label);
      if (ec != std::errc() || p != f.data() + f.size())
        throw LoadError("non-integer label '" + std::string(f) + "'", line_no);
    }
    std::vector<double> values(width - 1);
    for (std::size_t k = 1; k < width; ++k) {
      auto f = fields[k];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), values[k - 1]);
      if (ec != std::errc() || p != f.data() + f.size() || f.empty())
        throw LoadError("non-numeric cell '" + std::string(f) + "'", line_no);
    }
    raw_labels.push_back(label);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw LoadError("empty dataset file " + path.string());

  std::unordered_map<long, int> remap;
  if (label_values) label_values->clear();
  Labels labels;
  labels.reserve(raw_labels.size());
  for (long l : raw_labels) {
    auto [it, inserted] = remap.try_emplace(l, static_cast<int>(remap.size()));
    labels.push_back(it->second);
    if (inserted && label_values) label_values->push_back(l);
  }
  Matrix signals(static_cast<Eigen::Index>(width - 1), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i + 1 < width; ++i)
      signals(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
  for (std::size_t j = 0; j < rows.size(); ++j)
    if (signals.col(static_cast<Eigen::Index>(j)).squaredNorm() == 0.0)
      throw LoadError("all-zero signal", j + 1);
  return Dataset(std::move(signals), std::move(labels), static_cast<int>(remap.size()));
}

void save_csv(const Dataset &ds, const std::filesystem::path &path) {
  std::string out;
  for (int j = 0; j < ds.size(); ++j) {
    out += std::to_string(ds.labels()[j]);
    for (int i = 0; i < ds.dim(); ++i) {
      out += ',';
      out += format_double(ds.signals()(i, j));
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

namespace {

Vector random_unit(int n, Rng &rng) {
  Vector v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = standard_normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

void check_synth_args(int n, int p, int per_class, double spread) {
  if (n < 1) throw ArgumentError("synth: n must be >= 1");
  if (p < 2) throw ArgumentError("synth: need at least two classes");
  if (per_class < 2) throw ArgumentError("synth: per_class must be >= 2");
  if (!(spread >= 0.0) || !std::isfinite(spread))
    throw ArgumentError("synth: spread must be finite and non-negative");
}

}  // namespace

Dataset synth_gaussian_classes(int n, int p, int per_class, double spread,
                               std::uint64_t seed) {
  check_synth_args(n, p, per_class, spread);
  Rng rng = substream(seed, "synth");
  Matrix means(n, p);
  for (int c = 0; c < p; ++c) means.col(c) = random_unit(n, rng);
  Matrix signals(n, static_cast<Eigen::Index>(p) * per_class);
  Labels labels(static_cast<std::size_t>(p) * per_class);
  Eigen::Index j = 0;
  for (int c = 0; c < p; ++c) {
    for (int s = 0; s < per_class; ++s, ++j) {
      for (int i = 0; i < n; ++i) signals(i, j) = means(i, c) + spread * standard_normal(rng);
      labels[j] = c;
    }
  }
  return Dataset(std::move(signals), std::move(labels), p);
}

Dataset synth_subspace_classes(int n, int p, int per_class, int styles,
                               double spread, std::uint64_t seed) {
  check_synth_args(n, p, per_class, spread);
  if (styles < 1) throw ArgumentError("synth: styles must be >= 1");
  Rng rng = substream(seed, "synth");
  std::vector<Matrix> protos(p, Matrix(n, styles));
  for (int c = 0; c < p; ++c)
    for (int s = 0; s < styles; ++s) {
      Vector v = random_unit(n, rng).cwiseAbs();
      protos[c].col(s) = v / v.norm();
    }
  Matrix signals(n, static_cast<Eigen::Index>(p) * per_class);
  Labels labels(static_cast<std::size_t>(p) * per_class);
  Eigen::Index j = 0;
  const double scale = 1.0 / 18446744073709551616.0;
  for (int c = 0; c < p; ++c) {
    for (int k = 0; k < per_class; ++k, ++j) {
      Vector w(styles);
      for (int s = 0; s < styles; ++s) w(s) = -std::log((static_cast<double>(rng()) + 0.5) * scale);
      w /= w.sum();
      Vector y = protos[c] * w;
      for (int i = 0; i < n; ++i) y(i) = std::max(0.0, y(i) + spread * standard_normal(rng));
      if (y.squaredNorm() == 0.0) y = protos[c].col(0);
      signals.col(j) = y;
      labels[j] = c;
    }
  }
  return Dataset(std::move(signals), std::move(labels), p);
}

std::pair<Dataset, Dataset> split(const Dataset &ds, double train_fraction,
                                  std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ArgumentError("split: train_fraction must lie in (0, 1)");
  Rng rng = substream(seed, "split");
  std::vector<int> train, test;
  for (int c = 0; c < ds.num_classes(); ++c) {
    auto idx = ds.members(c);
    const int nc = static_cast<int>(idx.size());
    if (nc < 2) throw ArgumentError("split: class " + std::to_string(c) + " has fewer than 2 samples");
    int k = static_cast<int>(std::floor(train_fraction * nc + 0.5));
    k = std::clamp(k, 1, nc - 1);
    shuffle(idx.begin(), idx.end(), rng);
    train.insert(train.end(), idx.begin(), idx.begin() + k);
    test.insert(test.end(), idx.begin() + k, idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {ds.subset(train), ds.subset(test)};
}

Labels binary_labels(const Labels &labels, int c) {
  Labels out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] == c ? 1 : 0;
  return out;
}

BinaryRelabeling binary_labels(const Dataset &ds, int c) {
  if (c < 0 || c >= ds.num_classes())
    throw ArgumentError("binary_labels: class " + std::to_string(c) + " out of range");
  return {c, binary_labels(ds.labels(), c)};
}

MaskedDataset mask_pixels(const Dataset &ds, double missing_fraction,
                          std::uint64_t seed) {
  if (!(missing_fraction >= 0.0 && missing_fraction < 1.0))
    throw ArgumentError("mask_pixels: missing_fraction must lie in [0, 1)");
  const int n = ds.dim();
  const int missing = static_cast<int>(std::lround(missing_fraction * n));
  Rng rng = substream(seed, "mask");
  Mask mask = Mask::Constant(n, ds.size(), true);
  Matrix signals = ds.signals();
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int j = 0; j < ds.size(); ++j) {
    for (int i = 0; i < n; ++i) perm[i] = i;
    // Partial Fisher-Yates: the first `missing` slots are a uniform subset.
    for (int k = 0; k < missing; ++k) {
      int r = k + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n - k)));
      std::swap(perm[k], perm[r]);
      mask(perm[k], j) = false;
      signals(perm[k], j) = 0.0;
    }
  }
  return {Dataset(std::move(signals), ds.labels(), ds.num_classes()), std::move(mask)};
}

void save_mask_csv(const Mask &mask, const std::filesystem::path &path) {
  std::string out;
  out.reserve(static_cast<std::size_t>(mask.size()) * 2);
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      if (i) out += ',';
      out += mask(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

Mask load_mask_csv(const std::filesystem::path &path) {
  const std::string text = read_file(path);
  std::vector<std::vector<bool>> rows;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    std::vector<bool> row;
    for (auto f : split_fields(line)) {
      if (f == "1") row.push_back(true);
      else if (f == "0") row.push_back(false);
      else throw LoadError("mask cell must be 0 or 1", line_no);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw LoadError("ragged mask row", line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw LoadError("empty mask file " + path.string());
  Mask mask(static_cast<Eigen::Index>(rows.front().size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < rows[j].size(); ++i)
      mask(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
  return mask;
}

Dataset normalize_signals(const Dataset &ds) {
  Matrix s = ds.signals();
  for (Eigen::Index j = 0; j < s.cols(); ++j) s.col(j) /= s.col(j).norm();
  return Dataset(std::move(s), ds.labels(), ds.num_classes());
}

}  // namespace itdl
