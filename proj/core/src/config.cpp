#include "goalnet/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "goalnet/error.hpp"

namespace goalnet {

using nlohmann::ordered_json;

namespace {

std::string_view split_unit_name(SplitUnit u) { return u == SplitUnit::kGraph ? "graph" : "match"; }

ordered_json to_tree(const RunConfig& c) {
  const auto& m = c.model;
  const auto& t = c.training;
  return {
      {"paths",
       {{"events", c.paths.events},
        {"players", c.paths.players},
        {"cache", c.paths.cache},
        {"artifacts", c.paths.artifacts}}},
      {"fetch",
       {{"base_url", c.fetch.base_url},
        {"competition_id", c.fetch.competition_id},
        {"season_id", c.fetch.season_id},
        {"max_matches", c.fetch.max_matches},
        {"timeout_s", c.fetch.timeout_s},
        {"retries", c.fetch.retries}}},
      {"grid",
       {{"n_x", c.grid.n_x}, {"n_y", c.grid.n_y}, {"tol", c.grid.tol}, {"max_iter", c.grid.max_iter}}},
      {"window_k", c.window_k},
      {"model",
       {{"variant", std::string(to_string(m.variant))},
        {"hidden_dim", m.hidden_dim},
        {"n_layers", m.n_layers},
        {"n_heads", m.n_heads},
        {"ffn_dim", m.ffn_dim},
        {"edge_mlp_dims", {m.edge_mlp.in, m.edge_mlp.hidden, m.edge_mlp.out}},
        {"head_hidden_dim", m.head_hidden_dim},
        {"role_embedding_dim", m.role_embedding_dim}}},
      {"training",
       {{"lr", t.lr},
        {"weight_decay", t.weight_decay},
        {"epochs", t.epochs},
        {"batch", t.batch},
        {"split", t.split},
        {"split_unit", std::string(split_unit_name(t.split_unit))},
        {"patience", t.patience},
        {"lr_step", t.lr_step},
        {"lr_gamma", t.lr_gamma}}},
      {"seed", c.seed},
      {"attribution",
       {{"source", std::string(to_string(c.attribution_source))},
        {"centrality_features", c.centrality_features}}},
      {"rank", {{"mode", c.rank.mode == RankMode::kTotal ? "total" : "per90"}, {"top", c.rank.top}}},
      {"ablation", {{"k_values", c.ablation_k}}},
      {"case",
       {{"match_id", c.case_study.match_id},
        {"start_index", c.case_study.start_index},
        {"length", c.case_study.length}}},
  };
}

// Every key in `user` must exist in `defaults` with the same kind of value.
void check_keys(const ordered_json& user, const ordered_json& defaults, const std::string& where) {
  if (!user.is_object()) throw ConfigError("config: " + (where.empty() ? "top level" : where) + " must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!defaults.contains(it.key())) throw ConfigError("config: unknown key '" + key + "'");
    const auto& d = defaults.at(it.key());
    if (d.is_object()) check_keys(it.value(), d, key);
  }
}

template <typename T>
T get(const ordered_json& tree, const char* section, const char* key) {
  const auto& node = section ? tree.at(section).at(key) : tree.at(key);
  const std::string name = section ? std::string(section) + "." + key : std::string(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!node.is_boolean()) throw ConfigError("config: '" + name + "' must be true or false");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!node.is_number_unsigned() &&
          !(node.is_number_integer() && node.get<std::int64_t>() >= 0)) {
        throw ConfigError("config: '" + name + "' must be a non-negative integer");
      }
    } else if constexpr (std::is_integral_v<T>) {
      if (!node.is_number_integer()) throw ConfigError("config: '" + name + "' must be an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!node.is_number()) throw ConfigError("config: '" + name + "' must be a number");
    } else {
      if (!node.is_string()) throw ConfigError("config: '" + name + "' must be a string");
    }
    return node.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: '" + name + "': " + e.what());
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("config: " + what);
}

}  // namespace

ModelConfig RunConfig::model_config() const {
  ModelConfig m = model;
  m.seed = seed;
  m.node_feature_dim = centrality_features ? kNodeFeatureDim + kCentralityFeatureDim : kNodeFeatureDim;
  return m;
}

TrainOptions RunConfig::train_options() const {
  TrainOptions o;
  o.adam.lr = training.lr;
  o.adam.weight_decay = training.weight_decay;
  o.schedule = {training.lr_step, training.lr_gamma, training.patience};
  o.epochs = training.epochs;
  o.batch_size = training.batch;
  o.shuffle_seed = seed;
  return o;
}

RunConfig parse_config(std::string_view json_text) {
  ordered_json user;
  try {
    user = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ordered_json tree = to_tree(RunConfig{});
  check_keys(user, tree, "");
  tree.merge_patch(user);

  RunConfig c;
  c.paths.events = get<std::string>(tree, "paths", "events");
  c.paths.players = get<std::string>(tree, "paths", "players");
  c.paths.cache = get<std::string>(tree, "paths", "cache");
  c.paths.artifacts = get<std::string>(tree, "paths", "artifacts");

  c.fetch.base_url = get<std::string>(tree, "fetch", "base_url");
  c.fetch.competition_id = get<int>(tree, "fetch", "competition_id");
  c.fetch.season_id = get<int>(tree, "fetch", "season_id");
  c.fetch.max_matches = get<std::size_t>(tree, "fetch", "max_matches");
  c.fetch.timeout_s = get<int>(tree, "fetch", "timeout_s");
  c.fetch.retries = get<int>(tree, "fetch", "retries");
  require(c.fetch.base_url.rfind("http://", 0) == 0 || c.fetch.base_url.rfind("https://", 0) == 0,
          "fetch.base_url must start with http:// or https://");
  require(c.fetch.competition_id >= 0 && c.fetch.season_id >= 0, "fetch ids must be >= 0");
  require(c.fetch.timeout_s >= 1 && c.fetch.timeout_s <= 600, "fetch.timeout_s must be in [1, 600]");
  require(c.fetch.retries >= 0 && c.fetch.retries <= 10, "fetch.retries must be in [0, 10]");

  c.grid.n_x = get<std::size_t>(tree, "grid", "n_x");
  c.grid.n_y = get<std::size_t>(tree, "grid", "n_y");
  c.grid.tol = get<double>(tree, "grid", "tol");
  c.grid.max_iter = get<std::size_t>(tree, "grid", "max_iter");
  require(c.grid.n_x >= 1 && c.grid.n_x <= 200, "grid.n_x must be in [1, 200]");
  require(c.grid.n_y >= 1 && c.grid.n_y <= 200, "grid.n_y must be in [1, 200]");
  require(c.grid.tol > 0 && c.grid.tol < 1, "grid.tol must be in (0, 1)");
  require(c.grid.max_iter >= 1 && c.grid.max_iter <= 1000000, "grid.max_iter must be in [1, 1e6]");

  c.window_k = get<std::size_t>(tree, nullptr, "window_k");
  require(c.window_k <= 100, "window_k must be in [0, 100]");

  c.model.variant = [&] {
    try {
      return model_variant_from_string(get<std::string>(tree, "model", "variant"));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config: model.variant: ") + e.what());
    }
  }();
  c.model.hidden_dim = get<std::size_t>(tree, "model", "hidden_dim");
  c.model.n_layers = get<std::size_t>(tree, "model", "n_layers");
  c.model.n_heads = get<std::size_t>(tree, "model", "n_heads");
  c.model.ffn_dim = get<std::size_t>(tree, "model", "ffn_dim");
  {
    const auto& dims = tree.at("model").at("edge_mlp_dims");
    require(dims.is_array() && dims.size() == 3, "model.edge_mlp_dims must be [in, hidden, out]");
    for (const auto& d : dims) require(d.is_number_unsigned(), "model.edge_mlp_dims entries must be positive integers");
    c.model.edge_mlp = {dims[0].get<std::size_t>(), dims[1].get<std::size_t>(), dims[2].get<std::size_t>()};
  }
  c.model.head_hidden_dim = get<std::size_t>(tree, "model", "head_hidden_dim");
  c.model.role_embedding_dim = get<std::size_t>(tree, "model", "role_embedding_dim");
  require(c.model.hidden_dim <= 4096 && c.model.ffn_dim <= 16384 && c.model.head_hidden_dim <= 4096,
          "model widths must be <= 4096 (ffn_dim <= 16384)");
  require(c.model.n_layers <= 16, "model.n_layers must be in [1, 16]");
  require(c.model.n_heads <= 64, "model.n_heads must be in [1, 64]");

  auto& t = c.training;
  t.lr = get<double>(tree, "training", "lr");
  t.weight_decay = get<double>(tree, "training", "weight_decay");
  t.epochs = get<std::size_t>(tree, "training", "epochs");
  t.batch = get<std::size_t>(tree, "training", "batch");
  t.split = get<double>(tree, "training", "split");
  {
    const auto unit = get<std::string>(tree, "training", "split_unit");
    require(unit == "graph" || unit == "match", "training.split_unit must be graph or match");
    t.split_unit = unit == "graph" ? SplitUnit::kGraph : SplitUnit::kMatch;
  }
  t.patience = get<std::size_t>(tree, "training", "patience");
  t.lr_step = get<std::size_t>(tree, "training", "lr_step");
  t.lr_gamma = get<double>(tree, "training", "lr_gamma");
  require(t.lr > 0 && t.lr <= 1, "training.lr must be in (0, 1]");
  require(t.weight_decay >= 0 && t.weight_decay < 1, "training.weight_decay must be in [0, 1)");
  require(t.epochs >= 1 && t.epochs <= 10000, "training.epochs must be in [1, 10000]");
  require(t.batch >= 1 && t.batch <= 100000, "training.batch must be in [1, 100000]");
  require(t.split > 0 && t.split < 1, "training.split must be in (0, 1)");
  require(t.patience >= 1 && t.patience <= 10000, "training.patience must be in [1, 10000]");
  require(t.lr_step >= 1 && t.lr_step <= 10000, "training.lr_step must be in [1, 10000]");
  require(t.lr_gamma > 0 && t.lr_gamma <= 1, "training.lr_gamma must be in (0, 1]");

  c.seed = get<std::uint64_t>(tree, nullptr, "seed");
  try {
    c.attribution_source =
        attribution_source_from_string(get<std::string>(tree, "attribution", "source"));
    c.rank.mode = rank_mode_from_string(get<std::string>(tree, "rank", "mode"));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.centrality_features = get<bool>(tree, "attribution", "centrality_features");
  c.rank.top = get<std::size_t>(tree, "rank", "top");

  {
    const auto& ks = tree.at("ablation").at("k_values");
    require(ks.is_array() && !ks.empty(), "ablation.k_values must be a non-empty array");
    c.ablation_k.clear();
    for (const auto& k : ks) {
      require(k.is_number_unsigned() && k.get<std::size_t>() <= 100,
              "ablation.k_values entries must be integers in [0, 100]");
      c.ablation_k.push_back(k.get<std::size_t>());
    }
  }
  c.case_study.match_id = get<std::int64_t>(tree, "case", "match_id");
  c.case_study.start_index = get<std::size_t>(tree, "case", "start_index");
  c.case_study.length = get<std::size_t>(tree, "case", "length");
  require(c.case_study.match_id >= 0, "case.match_id must be >= 0");
  require(c.case_study.length <= 50, "case.length must be in [0, 50]");

  try {
    c.model_config().validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& config) { return to_tree(config).dump(2) + "\n"; }

}  // namespace goalnet
