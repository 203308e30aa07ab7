// src/cli.cpp

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

#include "itdl/cli.hpp"

#include <charconv>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "itdl/classify.hpp"
#include "itdl/dataset.hpp"
#include "itdl/error.hpp"
#include "itdl/itdu.hpp"
#include "itdl/matrix_io.hpp"

namespace itdl {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  const auto *ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <typename T>
T parse_number(const std::string &key, const std::string &value) {
  T out{};
  const char *first = value.data();
  const char *last = first + value.size();
  auto [p, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || p != last || value.empty())
    throw ConfigError("config key '" + key + "': cannot parse '" + value + "'");
  return out;
}

std::optional<double> parse_auto(const std::string &key, const std::string &value) {
  if (value == "auto") return std::nullopt;
  return parse_number<double>(key, value);
}

bool parse_bool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

void require_positive(const std::string &key, const std::optional<double> &v) {
  if (v && !(*v > 0.0)) throw ConfigError("config key '" + key + "' must be positive");
}

fs::path need(const fs::path &path, const std::string &what) {
  if (!fs::exists(path))
    throw std::runtime_error("missing " + what + " artifact: " + path.string());
  return path;
}

/// Runs one stage and maps failures to exit codes.
int run_stage(const std::string &stage, const std::function<void()> &body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError &e) {
    std::cerr << "itdl: " << stage << ": configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ArgumentError &e) {
    std::cerr << "itdl: " << stage << ": invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "itdl: " << stage << " failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

Dataset prepare(const Dataset &ds, const RunConfig &cfg) {
  return cfg.normalize_signals ? normalize_signals(ds) : ds;
}

/// Loads a CSV and maps its labels onto the class ids fixed at init time.
Dataset load_aligned(const fs::path &csv, const fs::path &out, const RunConfig &cfg) {
  auto ids = read_indices_csv(need(out / "class_labels.csv", "class labels"));
  std::vector<long> values;
  Dataset raw = load_csv(csv, &values);
  std::vector<int> to_class(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    auto it = std::find(ids.begin(), ids.end(), values[k]);
    if (it == ids.end())
      throw std::runtime_error(csv.string() + ": label " + std::to_string(values[k]) +
                               " does not occur in the training data");
    to_class[k] = static_cast<int>(it - ids.begin());
  }
  Labels labels(raw.labels().size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = to_class[raw.labels()[i]];
  return prepare(Dataset(raw.signals(), std::move(labels), static_cast<int>(ids.size())), cfg);
}

int class_count(const fs::path &out) {
  return static_cast<int>(read_indices_csv(need(out / "class_labels.csv", "class labels")).size());
}

Dictionary load_initial(const fs::path &out, const RunConfig &cfg) {
  Dictionary dict(read_matrix(need(out / artifacts::kInitialDictionary, "initial dictionary")));
  if (dict.size() != cfg.atoms)
    throw std::runtime_error("initial dictionary has " + std::to_string(dict.size()) +
                             " atoms, config says " + std::to_string(cfg.atoms));
  return dict;
}

/// Class ids covered by the configured mode: {-1} shared, 0..p-1 dedicated.
std::vector<int> class_ids(const RunConfig &cfg, const fs::path &out) {
  if (cfg.mode == Variant::kShared) return {-1};
  std::vector<int> ids(static_cast<std::size_t>(class_count(out)));
  for (std::size_t c = 0; c < ids.size(); ++c) ids[c] = static_cast<int>(c);
  return ids;
}

std::vector<Matrix> load_selected_atoms(const RunConfig &cfg, const fs::path &out) {
  Dictionary dict = load_initial(out, cfg);
  std::vector<Matrix> atoms;
  for (int c : class_ids(cfg, out)) {
    Selection sel{read_indices_csv(need(out / artifacts::selection_file(c), "selection"))};
    sel.validate(dict.size());
    if (sel.size() != cfg.sparsity)
      throw std::runtime_error(artifacts::selection_file(c) + " holds " +
                               std::to_string(sel.size()) + " atoms, config says " +
                               std::to_string(cfg.sparsity));
    atoms.push_back(gather_atoms(dict, sel));
  }
  return atoms;
}

LearnedAtoms load_updated_atoms(const RunConfig &cfg, const fs::path &out) {
  LearnedAtoms learned;
  learned.variant = cfg.mode;
  for (int c : class_ids(cfg, out)) {
    Matrix d = read_matrix(need(out / artifacts::updated_dictionary_file(c), "updated dictionary"));
    if (d.cols() != cfg.sparsity)
      throw std::runtime_error(artifacts::updated_dictionary_file(c) + " holds " +
                               std::to_string(d.cols()) + " atoms, config says " +
                               std::to_string(cfg.sparsity));
    learned.atoms.push_back(std::move(d));
  }
  return learned;
}

LinearModel load_model(const fs::path &out) {
  LinearModel model;
  model.weights = read_matrix(need(out / artifacts::kModelWeights, "model"));
  std::string text = read_file(need(out / artifacts::kModelBias, "model"));
  std::vector<double> bias;
  std::string_view rest = trim(text);
  while (!rest.empty()) {
    auto comma = rest.find(',');
    std::string cell(trim(rest.substr(0, comma)));
    bias.push_back(parse_number<double>("bias", cell));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (static_cast<Eigen::Index>(bias.size()) != model.weights.rows())
    throw std::runtime_error("model bias length does not match the weights");
  model.bias = Eigen::Map<Vector>(bias.data(), static_cast<Eigen::Index>(bias.size()));
  return model;
}

}  // namespace

const std::vector<std::string> &config_keys() {
  static const std::vector<std::string> keys = {
      "mode", "atoms", "sparsity", "ksvd-iters", "sigma", "sigma-r", "rho", "step",
      "iters", "tol", "seed", "ablation", "lambda2", "lambda3", "normalize-signals"};
  return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string &text) {
  std::map<std::string, std::string> pairs;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    std::string key(trim(view.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    pairs[key] = std::string(trim(view.substr(eq + 1)));
  }
  return pairs;
}

RunConfig RunConfig::from_pairs(const std::map<std::string, std::string> &pairs) {
  const auto &keys = config_keys();
  RunConfig cfg;
  bool have_seed = false;
  for (const auto &[key, value] : pairs) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("unknown config key '" + key + "'");
    if (key == "mode") {
      if (value != "shared" && value != "dedicated")
        throw ConfigError("mode must be 'shared' or 'dedicated', got '" + value + "'");
      cfg.mode = parse_variant(value);
    } else if (key == "atoms") {
      cfg.atoms = parse_number<int>(key, value);
    } else if (key == "sparsity") {
      cfg.sparsity = parse_number<int>(key, value);
    } else if (key == "ksvd-iters") {
      cfg.ksvd_iters = parse_number<int>(key, value);
    } else if (key == "sigma") {
      cfg.sigma = parse_auto(key, value);
    } else if (key == "sigma-r") {
      cfg.sigma_r = parse_auto(key, value);
    } else if (key == "rho") {
      cfg.rho = parse_auto(key, value);
    } else if (key == "step") {
      cfg.step = parse_number<double>(key, value);
    } else if (key == "iters") {
      cfg.iters = parse_number<int>(key, value);
    } else if (key == "tol") {
      cfg.tol = parse_number<double>(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(key, value);
      have_seed = true;
    } else if (key == "ablation") {
      cfg.ablation = value.empty() ? "all" : value;
    } else if (key == "lambda2") {
      cfg.lambda2 = parse_auto(key, value);
    } else if (key == "lambda3") {
      cfg.lambda3 = parse_auto(key, value);
    } else if (key == "normalize-signals") {
      cfg.normalize_signals = parse_bool(key, value);
    }
  }
  if (!have_seed) throw ConfigError("seed is mandatory");
  if (cfg.atoms < 2) throw ConfigError("atoms must be at least 2");
  if (cfg.sparsity < 1) throw ConfigError("sparsity must be at least 1");
  if (cfg.sparsity >= cfg.atoms)
    throw ConfigError("constraint sparsity < atoms (T < K) violated: sparsity " +
                      std::to_string(cfg.sparsity) + ", atoms " + std::to_string(cfg.atoms));
  if (cfg.ksvd_iters < 1) throw ConfigError("ksvd-iters must be at least 1");
  require_positive("sigma", cfg.sigma);
  require_positive("sigma-r", cfg.sigma_r);
  require_positive("rho", cfg.rho);
  if (!(cfg.step >= 0.0)) throw ConfigError("step must be non-negative");
  if (cfg.iters < 0) throw ConfigError("iters must be non-negative");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  if (cfg.lambda2 && !(*cfg.lambda2 >= 0.0)) throw ConfigError("lambda2 must be non-negative");
  if (cfg.lambda3 && !(*cfg.lambda3 >= 0.0)) throw ConfigError("lambda3 must be non-negative");
  try {
    (void)cfg.selection_mode();
  } catch (const ArgumentError &e) {
    throw ConfigError(std::string("ablation: ") + e.what());
  }
  return cfg;
}

SelectionMode RunConfig::selection_mode() const {
  return SelectionMode::with_ablation(mode, ablation);
}

namespace artifacts {
std::string selection_file(int class_id) {
  return class_id < 0 ? "selection.csv" : "selection_class" + std::to_string(class_id) + ".csv";
}
std::string updated_dictionary_file(int class_id) {
  return class_id < 0 ? "dictionary_updated.itdl"
                      : "dictionary_updated_class" + std::to_string(class_id) + ".itdl";
}
}  // namespace artifacts

int cmd_init(const RunConfig &cfg, const fs::path &train, const fs::path &out) {
  return run_stage("init", [&] {
    fs::create_directories(out);
    std::vector<long> values;
    Dataset ds = prepare(load_csv(train, &values), cfg);
    std::vector<int> ids;
    for (long v : values) {
      if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw std::runtime_error("label " + std::to_string(v) + " out of range");
      ids.push_back(static_cast<int>(v));
    }
    write_indices_csv(out / "class_labels.csv", ids);
    Dictionary dict = ksvd_init(ds.signals(), cfg.atoms, cfg.sparsity, cfg.ksvd_iters, cfg.seed);
    write_matrix(out / artifacts::kInitialDictionary, dict.atoms());
  });
}

int cmd_select(const RunConfig &cfg, const fs::path &train, const fs::path &out) {
  return run_stage("select", [&] {
    Dataset ds = load_aligned(train, out, cfg);
    Dictionary dict = load_initial(out, cfg);
    const Matrix &y = ds.signals();
    SparseCodes initial = omp_batch(dict, y, cfg.sparsity);
    SelectionModels models{
        GpModel::from_dictionary(dict, cfg.rho.value_or(0.0)),
        cfg.sigma_r ? ResidualModel{*cfg.sigma_r} : ResidualModel::from_signals(y),
        KdeConfig{cfg.sigma.value_or(1.0), !cfg.sigma.has_value()}};
    SelectionMode mode = cfg.selection_mode();

    std::vector<SelectionResult> results;
    if (cfg.mode == Variant::kShared) {
      SelectionWeights w;
      if (!cfg.lambda2 || !cfg.lambda3) w = estimate_lambdas(dict, initial, ds.labels(), y, models);
      if (cfg.lambda2) w.lambda2 = *cfg.lambda2;
      if (cfg.lambda3) w.lambda3 = *cfg.lambda3;
      results.push_back(
          select_shared(dict, y, ds.labels(), cfg.sparsity, mode, w, models, initial));
    } else {
      results = select_dedicated(dict, y, ds.labels(), cfg.sparsity, mode, models, initial,
                                 WeightOverrides{cfg.lambda2, cfg.lambda3});
    }
    for (const auto &r : results)
      write_indices_csv(out / artifacts::selection_file(r.class_id), r.selection.indices);
    write_file_atomic(out / artifacts::kSelectionReport, selection_report_json(results, mode));
  });
}

int cmd_update(const RunConfig &cfg, const fs::path &train, const fs::path &out) {
  return run_stage("update", [&] {
    std::vector<Matrix> selected = load_selected_atoms(cfg, out);
    Dataset ds = load_aligned(train, out, cfg);
    UpdateOptions opts;
    opts.step = cfg.step;
    opts.max_iters = cfg.iters;
    opts.tol = cfg.tol;
    opts.sigma = cfg.sigma;
    auto updates = update_all_classes(selected, ds.signals(), ds.labels(), cfg.mode, opts);

    std::string trace = "class,iteration,iq,step,grad_norm\n";
    for (const auto &u : updates) {
      write_matrix(out / artifacts::updated_dictionary_file(u.class_id), u.update.atoms);
      const auto &st = u.update.state;
      const std::string cls = std::to_string(u.class_id);
      if (!st.trace.empty()) trace += cls + ",0," + format_double(st.trace.front()) + ",0,\n";
      for (const auto &rec : st.records)
        trace += cls + "," + std::to_string(rec.iteration) + "," + format_double(rec.iq) + "," +
                 format_double(rec.step) + "," + format_double(rec.grad_norm) + "\n";
    }
    write_file_atomic(out / artifacts::kUpdateTrace, trace);
    write_file_atomic(out / artifacts::kUpdateReport, update_report_json(updates, cfg.mode));
  });
}

int cmd_train(const RunConfig &cfg, const fs::path &train, const fs::path &out) {
  return run_stage("train", [&] {
    LearnedAtoms learned = load_updated_atoms(cfg, out);
    Dataset ds = load_aligned(train, out, cfg);
    Matrix features = encode_features(learned, ds.signals());
    LinearModel model =
        train_linear(features, ds.labels(), 1.0 / ds.size(), 50, cfg.seed);
    write_matrix(out / artifacts::kModelWeights, model.weights);
    std::string bias;
    for (Eigen::Index c = 0; c < model.bias.size(); ++c)
      bias += (c ? "," : "") + format_double(model.bias(c));
    write_file_atomic(out / artifacts::kModelBias, bias + "\n");
  });
}

int cmd_evaluate(const RunConfig &cfg, const fs::path &test, const fs::path &out) {
  return run_stage("evaluate", [&] {
    LinearModel model = load_model(out);
    LearnedAtoms learned = load_updated_atoms(cfg, out);
    Dataset ds = load_aligned(test, out, cfg);
    EvalReport rep = evaluate(model, learned, ds);
    write_file_atomic(out / artifacts::kEvalReport, rep.to_json());
  });
}

int cmd_masked(const RunConfig &cfg, const fs::path &test, const fs::path &out,
               double missing_fraction) {
  return run_stage("masked", [&] {
    if (cfg.mode != Variant::kDedicated)
      throw ConfigError("masked reconstruction needs mode=dedicated");
    if (!(missing_fraction >= 0.0 && missing_fraction < 1.0))
      throw ConfigError("missing fraction must lie in [0, 1)");
    std::vector<Matrix> selected = load_selected_atoms(cfg, out);
    LearnedAtoms updated = load_updated_atoms(cfg, out);
    Dataset ds = load_aligned(test, out, cfg);
    MaskedDataset masked = mask_pixels(ds, missing_fraction, cfg.seed);
    save_mask_csv(masked.mask, out / artifacts::kMask);

    nlohmann::ordered_json j;
    j["missing_fraction"] = missing_fraction;
    auto score = [&](const std::vector<Matrix> &atoms, const std::string &tag) {
      auto r = reconstruct_masked(atoms, masked.data, masked.mask);
      j["accuracy_" + tag] = accuracy(ds.labels(), r.predicted);
      j["rmse_" + tag] = rmse(ds.signals(), r.reconstructions);
    };
    score(selected, "selected");
    score(updated.atoms, "updated");
    write_file_atomic(out / artifacts::kMaskedReport, j.dump(2) + "\n");
  });
}

int cmd_run_all(const RunConfig &cfg, const fs::path &train, const fs::path &test,
                const fs::path &out) {
  using Stage = std::function<int()>;
  const Stage stages[] = {
      [&] { return cmd_init(cfg, train, out); },   [&] { return cmd_select(cfg, train, out); },
      [&] { return cmd_update(cfg, train, out); }, [&] { return cmd_train(cfg, train, out); },
      [&] { return cmd_evaluate(cfg, test, out); }};
  for (const auto &stage : stages)
    if (int rc = stage(); rc != kExitOk) return rc;
  return kExitOk;
}

int cmd_run_all(const fs::path &config, const fs::path &train, const fs::path &test,
                const fs::path &out) {
  RunConfig cfg;
  int rc = run_stage("config", [&] {
    cfg = RunConfig::from_pairs(parse_config_text(read_file(config)));
  });
  if (rc != kExitOk) return rc;
  return cmd_run_all(cfg, train, test, out);
}

int run_cli(int argc, char **argv) {
  CLI::App app{"Information-theoretic dictionary learning for classification"};
  app.require_subcommand(1);

  std::string config_path, train_path, test_path, out_dir;
  std::map<std::string, std::string> overrides;
  double missing = 0.6;

  auto add_common = [&](CLI::App *sub, bool needs_train, bool needs_test) {
    sub->add_option("--config", config_path, "key=value run configuration")
        ->check(CLI::ExistingFile);
    if (needs_train) sub->add_option("--train", train_path, "training CSV")->required();
    if (needs_test) sub->add_option("--test", test_path, "test CSV")->required();
    sub->add_option("--out", out_dir, "artifact directory")->required();
    for (const auto &key : config_keys()) {
      if (key == "normalize-signals") {
        sub->add_flag_callback("--normalize-signals",
                               [&overrides] { overrides["normalize-signals"] = "true"; },
                               "l2-normalize every signal");
        continue;
      }
      sub->add_option_function<std::string>(
          "--" + key, [&overrides, key](const std::string &v) { overrides[key] = v; },
          "override config key " + key);
    }
  };

  auto *run = app.add_subcommand("run", "all stages: init, select, update, train, evaluate");
  add_common(run, true, true);
  auto *init = app.add_subcommand("init", "K-SVD initial dictionary");
  add_common(init, true, false);
  auto *select = app.add_subcommand("select", "greedy atom selection");
  add_common(select, true, false);
  auto *update = app.add_subcommand("update", "gradient-ascent atom update");
  add_common(update, true, false);
  auto *train = app.add_subcommand("train", "linear classifier on the codes");
  add_common(train, true, false);
  auto *eval = app.add_subcommand("evaluate", "accuracy, RMSE and information report");
  add_common(eval, false, true);
  auto *masked = app.add_subcommand("masked", "classification with missing pixels");
  add_common(masked, false, true);
  masked->add_option("--missing", missing, "fraction of hidden entries per signal")
      ->capture_default_str();

  auto *synth = app.add_subcommand("synth", "write a synthetic train/test pair");
  std::string kind = "gaussian", synth_train, synth_test;
  int dim = 16, classes = 4, per_class = 60, styles = 3;
  double spread = 0.5, fraction = 0.5;
  std::uint64_t synth_seed = 0;
  synth->add_option("--kind", kind, "gaussian or digits")
      ->check(CLI::IsMember({"gaussian", "digits"}))
      ->capture_default_str();
  synth->add_option("--dim", dim)->capture_default_str();
  synth->add_option("--classes", classes)->capture_default_str();
  synth->add_option("--per-class", per_class)->capture_default_str();
  synth->add_option("--styles", styles)->capture_default_str();
  synth->add_option("--spread", spread)->capture_default_str();
  synth->add_option("--train-fraction", fraction)->capture_default_str();
  synth->add_option("--seed", synth_seed)->required();
  synth->add_option("--train-out", synth_train)->required();
  synth->add_option("--test-out", synth_test)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (synth->parsed()) {
    return run_stage("synth", [&] {
      Dataset ds = kind == "gaussian"
                       ? synth_gaussian_classes(dim, classes, per_class, spread, synth_seed)
                       : synth_subspace_classes(dim, classes, per_class, styles, spread,
                                                synth_seed);
      auto [tr, te] = split(ds, fraction, synth_seed);
      save_csv(tr, synth_train);
      save_csv(te, synth_test);
    });
  }

  RunConfig cfg;
  if (int rc = run_stage("config",
                         [&] {
                           std::map<std::string, std::string> pairs;
                           if (!config_path.empty())
                             pairs = parse_config_text(read_file(config_path));
                           for (const auto &[k, v] : overrides) pairs[k] = v;
                           cfg = RunConfig::from_pairs(pairs);
                         });
      rc != kExitOk)
    return rc;

  if (run->parsed()) return cmd_run_all(cfg, train_path, test_path, out_dir);
  if (init->parsed()) return cmd_init(cfg, train_path, out_dir);
  if (select->parsed()) return cmd_select(cfg, train_path, out_dir);
  if (update->parsed()) return cmd_update(cfg, train_path, out_dir);
  if (train->parsed()) return cmd_train(cfg, train_path, out_dir);
  if (eval->parsed()) return cmd_evaluate(cfg, test_path, out_dir);
  return cmd_masked(cfg, test_path, out_dir, missing);
}

}  // namespace itdl
