#pragma once

// Stage runner behind the command-line tool. Each stage reads its inputs
// from, and writes its artifacts to, one stage directory; a manifest there
// records per-stage fingerprints and artifact digests so unchanged stages are
// skipped on re-runs.

#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "goalnet/config.hpp"

namespace goalnet {

enum class Stage {
  kFetch,
  kIngest,
  kXtFit,
  kBuildGraphs,
  kTrain,
  kEvaluate,
  kAttribute,
  kRank,
  kAblate,
  kPlotCase,
};

std::string_view to_string(Stage s);
Stage stage_from_string(std::string_view s);  // throws ConfigError
const std::vector<Stage>& all_stages();        // pipeline order
// Offline end-to-end run: ingest through plot-case, without fetch and ablate.
const std::vector<Stage>& default_run_stages();

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitMissingArtifact = 3,
  kExitNumeric = 4,
};
int exit_code_for(const std::exception& e);

struct StageResult {
  Stage stage;
  bool skipped = false;
  std::map<std::string, std::string> outputs;  // file name -> sha256
  std::string summary;
};

class Pipeline {
 public:
  using Logger = std::function<void(const std::string&)>;

  Pipeline(RunConfig config, std::filesystem::path stage_dir, Logger log = {});

  // Runs one stage unless its fingerprint and outputs match the manifest.
  StageResult run(Stage stage, bool force = false);
  std::vector<StageResult> run(const std::vector<Stage>& stages, bool force = false);

  const RunConfig& config() const { return config_; }
  const std::filesystem::path& stage_dir() const { return dir_; }
  std::filesystem::path artifact(std::string_view name) const { return dir_ / std::string(name); }

  // Re-hashes every artifact listed in the manifest; returns the names whose
  // digest no longer matches (missing files included).
  std::vector<std::string> verify_manifest() const;

 private:
  std::string fingerprint(Stage stage) const;
  std::map<std::string, std::string> execute(Stage stage, std::string& summary);
  void log(const std::string& msg) const;

  RunConfig config_;
  std::filesystem::path dir_;
  Logger log_;
};

// Ablation tables: rows = models, columns = train k..., val k...
struct AblationCell {
  bool ok = false;
  std::string error;
  double train_mae = 0, train_mse = 0, val_mae = 0, val_mse = 0;
};
using AblationGrid = std::map<std::pair<ModelVariant, std::size_t>, AblationCell>;

enum class AblationMetric { kMae, kMse, kCombined };
void write_ablation_csv(std::ostream& out, const AblationGrid& grid, const std::vector<std::size_t>& ks,
                        AblationMetric metric);

}  // namespace goalnet
