// include/itdl/cli.hpp

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

#ifndef ITDL_CLI_HPP_
#define ITDL_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "itdl/itds.hpp"

namespace itdl {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2 };

/// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Variant mode = Variant::kDedicated;
  int atoms = 64;
  int sparsity = 2;
  int ksvd_iters = 10;
  std::optional<double> sigma;    ///< KDE bandwidth; empty = automatic
  std::optional<double> sigma_r;  ///< residual scale; empty = 0.1 x mean norm
  std::optional<double> rho;      ///< GP length scale; empty = median distance
  double step = 0.05;
  int iters = 30;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string ablation = "all";
  std::optional<double> lambda2;
  std::optional<double> lambda3;
  bool normalize_signals = false;

  /// Builds a config from key=value pairs. Unknown keys, malformed values,
  /// a missing seed or a violated constraint raise ConfigError.
  static RunConfig from_pairs(const std::map<std::string, std::string> &pairs);
  SelectionMode selection_mode() const;
};

/// Parses a flat key=value file; '#' starts a comment, blank lines are
/// ignored, later keys override earlier ones.
std::map<std::string, std::string> parse_config_text(const std::string &text);

/// Every config key, which is also the name of its command-line flag.
const std::vector<std::string> &config_keys();

/// File names inside an output directory.
namespace artifacts {
inline constexpr const char *kInitialDictionary = "dictionary_init.itdl";
inline constexpr const char *kSelectionReport = "selection_report.json";
inline constexpr const char *kUpdateReport = "update_report.json";
inline constexpr const char *kUpdateTrace = "update_trace.csv";
inline constexpr const char *kModelWeights = "model_weights.itdl";
inline constexpr const char *kModelBias = "model_bias.csv";
inline constexpr const char *kEvalReport = "eval_report.json";
inline constexpr const char *kMask = "mask.csv";
inline constexpr const char *kMaskedReport = "masked_report.json";

/// selection.csv (shared) or selection_class<c>.csv.
std::string selection_file(int class_id);
/// dictionary_updated.itdl (shared) or dictionary_updated_class<c>.itdl.
std::string updated_dictionary_file(int class_id);
}  // namespace artifacts

// Stage entry points. Each returns an ExitCode and reports failures on
// standard error with the stage name; artifacts already written are kept.
int cmd_init(const RunConfig &cfg, const std::filesystem::path &train,
             const std::filesystem::path &out);
int cmd_select(const RunConfig &cfg, const std::filesystem::path &train,
               const std::filesystem::path &out);
int cmd_update(const RunConfig &cfg, const std::filesystem::path &train,
               const std::filesystem::path &out);
int cmd_train(const RunConfig &cfg, const std::filesystem::path &train,
              const std::filesystem::path &out);
int cmd_evaluate(const RunConfig &cfg, const std::filesystem::path &test,
                 const std::filesystem::path &out);
/// Masked-pixel classification on `test` with the selected and the updated
/// per-class atoms (dedicated mode only).
int cmd_masked(const RunConfig &cfg, const std::filesystem::path &test,
               const std::filesystem::path &out, double missing_fraction);
/// init, select, update, train and evaluate in sequence.
int cmd_run_all(const RunConfig &cfg, const std::filesystem::path &train,
                const std::filesystem::path &test, const std::filesystem::path &out);
int cmd_run_all(const std::filesystem::path &config, const std::filesystem::path &train,
                const std::filesystem::path &test, const std::filesystem::path &out);

/// Command-line entry point.
int run_cli(int argc, char **argv);

}  // namespace itdl

#endif  // ITDL_CLI_HPP_
