#pragma once

// Run configuration: one JSON file drives every pipeline stage. Missing keys
// take defaults, unknown keys are rejected, every value is range-checked.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "goalnet/credit.hpp"
#include "goalnet/graphs.hpp"
#include "goalnet/models.hpp"
#include "goalnet/train.hpp"

namespace goalnet {

struct PathsConfig {
  std::string events = "data/fixture/events";  // directory of <match_id>.json files
  std::string players = "data/fixture/players.csv";
  std::string cache = "cache";
  std::string artifacts = "artifacts";
  friend bool operator==(const PathsConfig&, const PathsConfig&) = default;
};

struct FetchConfig {
  std::string base_url = "https://raw.githubusercontent.com/statsbomb/open-data/master/data";
  int competition_id = 2;  // Premier League
  int season_id = 27;      // 2015/16
  std::size_t max_matches = 0;  // 0 = all
  int timeout_s = 30;
  int retries = 3;
  friend bool operator==(const FetchConfig&, const FetchConfig&) = default;
};

struct GridConfig {
  std::size_t n_x = 16;
  std::size_t n_y = 12;
  double tol = 1e-8;
  std::size_t max_iter = 1000;
  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct TrainingConfig {
  double lr = 1e-4;
  double weight_decay = 1e-4;
  std::size_t epochs = 25;
  std::size_t batch = 64;
  double split = 0.8;
  SplitUnit split_unit = SplitUnit::kGraph;
  std::size_t patience = 5;
  std::size_t lr_step = 10;
  double lr_gamma = 0.5;
  friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

struct RankConfig {
  RankMode mode = RankMode::kTotal;
  std::size_t top = 20;  // rows in the text table; 0 = all
  friend bool operator==(const RankConfig&, const RankConfig&) = default;
};

struct CaseConfig {
  std::int64_t match_id = 0;  // 0 = first match
  std::size_t start_index = 0;
  std::size_t length = 4;
  friend bool operator==(const CaseConfig&, const CaseConfig&) = default;
};

struct RunConfig {
  PathsConfig paths;
  FetchConfig fetch;
  GridConfig grid;
  std::size_t window_k = 5;
  ModelConfig model;  // model.seed is overwritten by `seed`
  TrainingConfig training;
  std::uint64_t seed = 42;
  AttributionSource attribution_source = AttributionSource::kPredicted;
  bool centrality_features = false;
  RankConfig rank;
  std::vector<std::size_t> ablation_k = {1, 3, 5, 7, 9};
  CaseConfig case_study;

  // Model config with the run seed applied.
  ModelConfig model_config() const;
  TrainOptions train_options() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);
// Effective configuration including defaults; parse_config(to_json(c)) == c.
std::string config_to_json(const RunConfig& config);

}  // namespace goalnet
