#include "goalnet/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "goalnet/centrality.hpp"
#include "goalnet/checkpoint.hpp"
#include "goalnet/credit.hpp"
#include "goalnet/digest.hpp"
#include "goalnet/error.hpp"
#include "goalnet/fetch.hpp"
#include "goalnet/format.hpp"
#include "goalnet/svg.hpp"
#include "goalnet/xt.hpp"

namespace goalnet {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kActions = "actions.ndjson";
constexpr const char* kGrid = "xt_grid.json";
constexpr const char* kGraphs = "graphs.ndjson";
constexpr const char* kCheckpoint = "model.ckpt";
constexpr const char* kLedger = "ledger.csv";

struct StageInfo {
  Stage stage;
  const char* name;
};
constexpr StageInfo kStages[] = {
    {Stage::kFetch, "fetch"},         {Stage::kIngest, "ingest"},     {Stage::kXtFit, "xt-fit"},
    {Stage::kBuildGraphs, "build-graphs"}, {Stage::kTrain, "train"},  {Stage::kEvaluate, "evaluate"},
    {Stage::kAttribute, "attribute"}, {Stage::kRank, "rank"},         {Stage::kAblate, "ablate"},
    {Stage::kPlotCase, "plot-case"},
};

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + p.string());
}

ordered_json read_manifest(const fs::path& dir) {
  const fs::path p = dir / kManifest;
  if (!fs::exists(p)) return ordered_json::object();
  try {
    return ordered_json::parse(read_text(p));
  } catch (const nlohmann::json::exception&) {
    return ordered_json::object();  // unreadable manifest: everything reruns
  }
}

std::vector<fs::path> event_files(const fs::path& dir) {
  std::vector<std::pair<MatchId, fs::path>> found;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto& p = entry.path();
      const std::string stem = p.stem().string();
      if (p.extension() != ".json" || stem.empty() ||
          !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        continue;
      }
      found.emplace_back(std::stoll(stem), p);
    }
  }
  std::sort(found.begin(), found.end());
  std::vector<fs::path> out;
  for (auto& [id, p] : found) out.push_back(p);
  return out;
}

std::vector<SpadlAction> load_actions(const fs::path& dir) {
  std::ifstream in(dir / kActions);
  if (!in) throw MissingArtifactError(std::string(kActions) + " not found in " + dir.string() + "; run ingest first");
  return read_actions_ndjson(in);
}

XtGrid load_grid(const fs::path& dir) {
  std::ifstream in(dir / kGrid);
  if (!in) throw MissingArtifactError(std::string(kGrid) + " not found in " + dir.string() + "; run xt-fit first");
  return read_grid_json(in);
}

std::vector<EventGraph> load_graphs(const fs::path& dir) {
  std::ifstream in(dir / kGraphs);
  if (!in) throw MissingArtifactError(std::string(kGraphs) + " not found in " + dir.string() + "; run build-graphs first");
  return read_graphs_ndjson(in);
}

Checkpoint load_checkpoint(const fs::path& dir) {
  if (!fs::exists(dir / kCheckpoint)) {
    throw MissingArtifactError(std::string(kCheckpoint) + " not found in " + dir.string() + "; run train first");
  }
  Checkpoint c = read_checkpoint(dir / kCheckpoint);
  if (c.graph_schema_version != kGraphSchemaVersion) {
    throw SchemaError("checkpoint was trained on graph schema version " +
                      std::to_string(c.graph_schema_version) + ", this build reads version " +
                      std::to_string(kGraphSchemaVersion));
  }
  return c;
}

CreditLedger load_ledger(const fs::path& dir) {
  std::ifstream in(dir / kLedger);
  if (!in) throw MissingArtifactError(std::string(kLedger) + " not found in " + dir.string() + "; run attribute first");
  return read_ledger_csv(in);
}

std::map<PlayerId, PlayerSeasonStats> load_players(const RunConfig& c) {
  if (!fs::exists(c.paths.players)) {
    throw MissingArtifactError("player statistics not found: " + c.paths.players);
  }
  return load_player_stats(c.paths.players);
}

std::vector<MatchStream> prepare_streams(const std::vector<SpadlAction>& actions, const XtGrid& grid) {
  std::vector<MatchStream> streams;
  for (auto& match : split_by_match(actions)) streams.push_back(prepare_match(std::move(match), grid));
  return streams;
}

std::vector<EventGraph> graphs_for(const std::vector<MatchStream>& streams, std::size_t k,
                                   const PlayerTable& players, bool centrality_features) {
  auto graphs = build_corpus_graphs(streams, k, players);
  if (centrality_features) {
    std::vector<PassingNetwork> nets;
    for (const auto& s : streams) nets.push_back(passing_network(s.actions, s.recipients));
    append_centrality_features(graphs, nets);
  }
  return graphs;
}

ordered_json metrics_json(const Metrics& m) {
  return {{"mse", m.mse}, {"mae", m.mae}, {"combined", m.combined}, {"count", m.count}};
}

}  // namespace

std::string_view to_string(Stage s) {
  for (const auto& i : kStages) {
    if (i.stage == s) return i.name;
  }
  return "?";
}

Stage stage_from_string(std::string_view s) {
  for (const auto& i : kStages) {
    if (s == i.name) return i.stage;
  }
  throw ConfigError("unknown stage '" + std::string(s) + "'");
}

const std::vector<Stage>& all_stages() {
  static const std::vector<Stage> v = [] {
    std::vector<Stage> out;
    for (const auto& i : kStages) out.push_back(i.stage);
    return out;
  }();
  return v;
}

const std::vector<Stage>& default_run_stages() {
  static const std::vector<Stage> v = {Stage::kIngest, Stage::kXtFit,     Stage::kBuildGraphs,
                                       Stage::kTrain,  Stage::kEvaluate,  Stage::kAttribute,
                                       Stage::kRank,   Stage::kPlotCase};
  return v;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const MissingArtifactError*>(&e)) return kExitMissingArtifact;
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  return kExitFailure;
}

Pipeline::Pipeline(RunConfig config, fs::path stage_dir, Logger log)
    : config_(std::move(config)), dir_(std::move(stage_dir)), log_(std::move(log)) {}

void Pipeline::log(const std::string& msg) const {
  if (log_) log_(msg);
}

// Hash of the configuration the stage reads plus the digests of its inputs.
std::string Pipeline::fingerprint(Stage stage) const {
  const ordered_json cfg = ordered_json::parse(config_to_json(config_));
  ordered_json f;
  f["stage"] = std::string(to_string(stage));
  auto input = [&](const fs::path& p) {
    f["inputs"][p.filename().string()] = fs::exists(p) ? sha256_file(p) : "missing";
  };
  switch (stage) {
    case Stage::kFetch:
      f["config"] = cfg["fetch"];
      f["cache"] = config_.paths.cache;
      break;
    case Stage::kIngest:
      for (const auto& p : event_files(config_.paths.events)) input(p);
      break;
    case Stage::kXtFit:
      f["config"] = cfg["grid"];
      input(dir_ / kActions);
      break;
    case Stage::kBuildGraphs:
      f["config"] = {{"window_k", cfg["window_k"]}, {"attribution", cfg["attribution"]}};
      input(dir_ / kActions);
      input(dir_ / kGrid);
      input(config_.paths.players);
      break;
    case Stage::kTrain:
    case Stage::kEvaluate:
      f["config"] = {{"model", cfg["model"]}, {"training", cfg["training"]}, {"seed", cfg["seed"]}};
      input(dir_ / kGraphs);
      if (stage == Stage::kEvaluate) input(dir_ / kCheckpoint);
      break;
    case Stage::kAttribute:
      f["config"] = cfg["attribution"];
      input(dir_ / kActions);
      input(dir_ / kGraphs);
      input(dir_ / kCheckpoint);
      break;
    case Stage::kRank:
      f["config"] = cfg["rank"];
      input(dir_ / kLedger);
      input(config_.paths.players);
      break;
    case Stage::kAblate:
      f["config"] = {{"ablation", cfg["ablation"]}, {"model", cfg["model"]},
                     {"training", cfg["training"]}, {"seed", cfg["seed"]},
                     {"attribution", cfg["attribution"]}};
      input(dir_ / kActions);
      input(dir_ / kGrid);
      input(config_.paths.players);
      break;
    case Stage::kPlotCase:
      f["config"] = cfg["case"];
      input(dir_ / kActions);
      input(dir_ / kLedger);
      input(config_.paths.players);
      break;
  }
  return sha256_hex(f.dump());
}

StageResult Pipeline::run(Stage stage, bool force) {
  fs::create_directories(dir_);
  const std::string name(to_string(stage));
  const std::string fp = fingerprint(stage);
  ordered_json manifest = read_manifest(dir_);

  StageResult result{stage, false, {}, {}};
  if (!force && manifest.contains("stages") && manifest["stages"].contains(name)) {
    const auto& entry = manifest["stages"][name];
    bool fresh = entry.value("fingerprint", "") == fp;
    for (auto it = entry["outputs"].begin(); fresh && it != entry["outputs"].end(); ++it) {
      const fs::path p = dir_ / it.key();
      fresh = fs::exists(p) && sha256_file(p) == it.value().get<std::string>();
    }
    if (fresh) {
      result.skipped = true;
      for (auto it = entry["outputs"].begin(); it != entry["outputs"].end(); ++it) {
        result.outputs[it.key()] = it.value().get<std::string>();
      }
      result.summary = entry.value("summary", "");
      log(name + ": up to date, skipped");
      return result;
    }
  }

  log(name + ": running");
  const auto files = execute(stage, result.summary);
  for (const auto& f : files) result.outputs[f.first] = sha256_file(dir_ / f.first);
  log(name + ": " + result.summary);

  manifest = read_manifest(dir_);
  const std::string cfg_text = config_to_json(config_);
  manifest["format"] = "goalnet.manifest/1";
  manifest["config_hash"] = sha256_hex(cfg_text);
  manifest["seed"] = config_.seed;
  manifest["config"] = ordered_json::parse(cfg_text);
  ordered_json outs = ordered_json::object();
  for (const auto& [file, digest] : result.outputs) outs[file] = digest;
  manifest["stages"][name] = {{"fingerprint", fp}, {"summary", result.summary}, {"outputs", outs}};
  write_text(dir_ / kManifest, manifest.dump(2) + "\n");
  return result;
}

std::vector<StageResult> Pipeline::run(const std::vector<Stage>& stages, bool force) {
  std::vector<StageResult> out;
  for (Stage s : stages) out.push_back(run(s, force));
  return out;
}

std::vector<std::string> Pipeline::verify_manifest() const {
  std::vector<std::string> bad;
  const ordered_json manifest = read_manifest(dir_);
  if (!manifest.contains("stages")) return bad;
  for (const auto& [stage, entry] : manifest["stages"].items()) {
    for (const auto& [file, digest] : entry["outputs"].items()) {
      const fs::path p = dir_ / file;
      if (!fs::exists(p) || sha256_file(p) != digest.get<std::string>()) bad.push_back(file);
    }
  }
  return bad;
}

std::map<std::string, std::string> Pipeline::execute(Stage stage, std::string& summary) {
  const RunConfig& c = config_;
  std::map<std::string, std::string> files;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text(dir_ / name, text);
    files[name] = "";
  };

  switch (stage) {
    case Stage::kFetch: {
      FetchOptions o{c.fetch.base_url, c.fetch.competition_id, c.fetch.season_id,
                     c.fetch.max_matches, c.fetch.timeout_s, c.fetch.retries, c.paths.cache};
      const auto report = fetch_season(o, [this](const std::string& m) { log(m); });
      ParseSummary total;
      for (MatchId id : report.match_ids) {
        ParseSummary s;
        parse_events(report.events_dir / (std::to_string(id) + ".json"), &s);
        total += s;
      }
      ordered_json j = {{"competition_id", c.fetch.competition_id},
                        {"season_id", c.fetch.season_id},
                        {"matches", report.match_ids.size()},
                        {"downloaded", report.downloaded},
                        {"from_cache", report.from_cache},
                        {"events_dir", report.events_dir.string()},
                        {"provider_events", total.rows},
                        {"kept_events", total.kept}};
      emit("fetch_report.json", j.dump(2) + "\n");
      summary = std::to_string(report.match_ids.size()) + " matches, " + std::to_string(total.rows) +
                " provider events (" + std::to_string(total.kept) + " on-ball) in " +
                report.events_dir.string();
      break;
    }
    case Stage::kIngest: {
      const auto paths = event_files(c.paths.events);
      if (paths.empty()) {
        throw MissingArtifactError("no <match_id>.json event files in " + c.paths.events +
                                   "; run fetch first or set paths.events");
      }
      std::vector<SpadlAction> all;
      ParseSummary total;
      ordered_json per_match = ordered_json::array();
      for (const auto& p : paths) {
        ParseSummary s;
        const auto actions = to_spadl(parse_events(p, &s));
        per_match.push_back({{"file", p.filename().string()},
                             {"rows", s.rows},
                             {"kept", s.kept},
                             {"actions", actions.size()},
                             {"dropped_off_ball", s.dropped_off_ball},
                             {"dropped_missing_coordinates", s.dropped_missing_coordinates},
                             {"dropped_missing_player", s.dropped_missing_player},
                             {"unknown_types", s.unknown_types}});
        total += s;
        all.insert(all.end(), actions.begin(), actions.end());
      }
      std::ostringstream out;
      write_actions_ndjson(out, all);
      emit(kActions, out.str());
      ordered_json j = {{"matches", paths.size()}, {"rows", total.rows},       {"kept", total.kept},
                        {"actions", all.size()},    {"dropped", total.dropped()}, {"per_match", per_match}};
      emit("ingest_report.json", j.dump(2) + "\n");
      summary = std::to_string(paths.size()) + " matches, " + std::to_string(all.size()) +
                " actions (" + std::to_string(total.dropped()) + " of " + std::to_string(total.rows) +
                " rows dropped)";
      break;
    }
    case Stage::kXtFit: {
      const auto actions = load_actions(dir_);
      const XtGrid grid = fit_grid(actions, c.grid.n_x, c.grid.n_y, c.grid.tol, c.grid.max_iter);
      std::ostringstream out;
      write_grid_json(out, grid);
      emit(kGrid, out.str());
      summary = std::to_string(c.grid.n_x) + "x" + std::to_string(c.grid.n_y) + " grid, " +
                std::to_string(grid.iterations) + " iterations, " +
                std::to_string(grid.flagged_zones.size()) + " flagged zones";
      break;
    }
    case Stage::kBuildGraphs: {
      const auto actions = load_actions(dir_);
      const XtGrid grid = load_grid(dir_);
      const PlayerTable players = PlayerTable::from_stats(load_players(c));
      const auto streams = prepare_streams(actions, grid);
      const auto graphs = graphs_for(streams, c.window_k, players, c.centrality_features);
      std::size_t imputed = 0;
      for (const auto& g : graphs) imputed += g.imputed_nodes;
      std::ostringstream out;
      write_graphs_ndjson(out, graphs);
      emit(kGraphs, out.str());
      summary = std::to_string(graphs.size()) + " graphs (k=" + std::to_string(c.window_k) + "), " +
                std::to_string(imputed) + " imputed nodes";
      break;
    }
    case Stage::kTrain: {
      const auto graphs = load_graphs(dir_);
      const Dataset ds = make_dataset(graphs, c.training.split, c.seed, c.training.split_unit);
      TrainResult r = train(c.model_config(), ds.train, ds.validation, c.train_options());
      std::ostringstream log_csv;
      write_epoch_log_csv(log_csv, r.log);
      emit("train_log.csv", log_csv.str());
      AdamOptions adam = c.train_options().adam;
      adam.lr = r.final_lr;
      write_checkpoint(dir_ / kCheckpoint, Checkpoint{r.model, {adam, r.optimizer_steps},
                                                     kGraphSchemaVersion, r.best_epoch});
      files[kCheckpoint] = "";
      if (r.diverged) {
        throw NumericError("training diverged (" + r.divergence + "); " + std::string(kCheckpoint) +
                           " holds the last good parameters");
      }
      summary = std::string(to_string(c.model.variant)) + ": " + std::to_string(r.log.size()) +
                " epochs, best val MSE " + fmt_real(r.best_val_mse) + " at epoch " +
                std::to_string(r.best_epoch);
      break;
    }
    case Stage::kEvaluate: {
      const auto graphs = load_graphs(dir_);
      const Checkpoint ckpt = load_checkpoint(dir_);
      const Dataset ds = make_dataset(graphs, c.training.split, c.seed, c.training.split_unit);
      const Metrics tr = evaluate(ckpt.model, ds.train);
      const Metrics va = evaluate(ckpt.model, ds.validation);
      ordered_json j = {{"variant", std::string(to_string(ckpt.model.config().variant))},
                        {"train", metrics_json(tr)},
                        {"validation", metrics_json(va)}};
      emit("metrics.json", j.dump(2) + "\n");
      summary = "val mse " + fmt_real(va.mse) + ", mae " + fmt_real(va.mae);
      break;
    }
    case Stage::kAttribute: {
      const auto actions = load_actions(dir_);
      const auto graphs = load_graphs(dir_);
      const Checkpoint ckpt = load_checkpoint(dir_);
      const auto matches = split_by_match(actions);
      std::map<MatchId, const std::vector<SpadlAction>*> by_id;
      for (const auto& m : matches) {
        if (!m.empty()) by_id[m.front().game_id] = &m;
      }
      CreditLedger ledger;
      for (const auto& g : graphs) {
        auto it = by_id.find(g.match_id);
        if (it == by_id.end() || g.event_index >= it->second->size()) {
          throw SchemaError("graph " + std::to_string(g.event_id) + " has no matching action; rebuild graphs");
        }
        const SpadlAction& a = (*it->second)[g.event_index];
        const ModelOutput out = ckpt.model.predict(g);
        const double delta = c.attribution_source == AttributionSource::kPredicted ? out.prediction : g.label;
        ledger.add(g, out.node_embeddings, delta, a.player_id, a.team_id);
      }
      std::ostringstream out;
      write_ledger_csv(out, ledger);
      emit(kLedger, out.str());

      std::vector<CentralityRow> rows;
      for (const auto& m : matches) {
        const auto recipients = infer_recipients(m);
        const auto r = centrality_report(passing_network(m, recipients));
        rows.insert(rows.end(), r.begin(), r.end());
      }
      std::ostringstream cent;
      write_centrality_csv(cent, rows);
      emit("centrality.csv", cent.str());
      ordered_json j = {{"events", ledger.events().size()},
                        {"source", std::string(to_string(c.attribution_source))},
                        {"degenerate_events", ledger.degenerate_events()}};
      emit("attribution_report.json", j.dump(2) + "\n");
      summary = std::to_string(ledger.events().size()) + " events attributed (" +
                std::string(to_string(c.attribution_source)) + " delta), " +
                std::to_string(ledger.degenerate_events()) + " degenerate";
      break;
    }
    case Stage::kRank: {
      const CreditLedger ledger = load_ledger(dir_);
      const auto stats = load_players(c);
      const auto overall = rank(ledger, c.rank.mode, RankScope::kOverall, stats);
      const auto by_team = rank(ledger, c.rank.mode, RankScope::kByTeam, stats);
      std::ostringstream a, b;
      write_ranking_csv(a, overall);
      write_ranking_csv(b, by_team);
      emit("ranking.csv", a.str());
      emit("ranking_by_team.csv", b.str());
      std::vector<RankRow> top = overall;
      if (c.rank.top > 0 && top.size() > c.rank.top) top.resize(c.rank.top);
      emit("ranking.txt", "Top players\n" + render_ranking_table(top, c.rank.mode) +
                              "\nTop player per team\n" + render_ranking_table(by_team, c.rank.mode));
      summary = std::to_string(overall.size()) + " players ranked";
      break;
    }
    case Stage::kAblate: {
      const auto actions = load_actions(dir_);
      const XtGrid grid = load_grid(dir_);
      const PlayerTable players = PlayerTable::from_stats(load_players(c));
      const auto streams = prepare_streams(actions, grid);
      AblationGrid cells;
      const ModelVariant variants[] = {ModelVariant::kGcn, ModelVariant::kGat, ModelVariant::kTransformer};
      std::size_t failed = 0;
      for (std::size_t k : c.ablation_k) {
        const auto graphs = graphs_for(streams, k, players, c.centrality_features);
        const Dataset ds = make_dataset(graphs, c.training.split, c.seed, c.training.split_unit);
        for (ModelVariant v : variants) {
          AblationCell cell;
          try {
            ModelConfig mc = c.model_config();
            mc.variant = v;
            const TrainResult r = train(mc, ds.train, ds.validation, c.train_options());
            if (r.diverged) throw NumericError(r.divergence);
            const EpochRecord& best = r.log.at(r.best_epoch - 1);
            cell = {true, "", best.train.mae, best.train.mse, best.validation.mae, best.validation.mse};
          } catch (const std::exception& e) {
            cell.error = e.what();
            ++failed;
          }
          log("ablate: " + std::string(to_string(v)) + " k=" + std::to_string(k) +
              (cell.ok ? " val mae " + fmt_real(cell.val_mae) : " FAILED: " + cell.error));
          cells[{v, k}] = cell;
        }
      }
      const std::pair<const char*, AblationMetric> tables[] = {{"ablation_mae.csv", AblationMetric::kMae},
                                                               {"ablation_mse.csv", AblationMetric::kMse},
                                                               {"ablation_combined.csv", AblationMetric::kCombined}};
      for (const auto& [file, metric] : tables) {
        std::ostringstream out;
        write_ablation_csv(out, cells, c.ablation_k, metric);
        emit(file, out.str());
      }
      summary = std::to_string(cells.size()) + " cells, " + std::to_string(failed) + " failed";
      break;
    }
    case Stage::kPlotCase: {
      const auto actions = load_actions(dir_);
      const CreditLedger ledger = load_ledger(dir_);
      const auto matches = split_by_match(actions);
      const std::vector<SpadlAction>* match = nullptr;
      for (const auto& m : matches) {
        if (!m.empty() && (c.case_study.match_id == 0 || m.front().game_id == c.case_study.match_id)) {
          match = &m;
          break;
        }
      }
      if (!match) throw ConfigError("case.match_id " + std::to_string(c.case_study.match_id) + " not among ingested matches");
      std::vector<std::pair<EventId, SpadlAction>> seq;
      const std::size_t end = std::min(match->size(), c.case_study.start_index + c.case_study.length);
      for (std::size_t i = c.case_study.start_index; i < end; ++i) {
        seq.emplace_back(make_event_id((*match)[i].game_id, i), (*match)[i]);
      }
      const auto steps = case_report(seq, ledger);
      PlotOptions po;
      po.title = "match " + std::to_string(match->front().game_id) + ", actions " +
                 std::to_string(c.case_study.start_index) + "-" + std::to_string(end);
      if (fs::exists(c.paths.players)) {
        for (const auto& [id, s] : load_player_stats(c.paths.players)) {
          if (!s.name.empty()) po.names[id] = s.name;
        }
      }
      emit("case.svg", plot_case(steps, po));
      std::ostringstream csv;
      csv << "step,event_id,player_id,action_type,start_x,start_y,end_x,end_y,attributed,event_delta\n";
      for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& s = steps[i];
        csv << i + 1 << ',' << s.event_id << ',' << s.action.player_id << ','
            << to_string(s.action.action_type) << ',' << fmt_real(s.action.start_x) << ','
            << fmt_real(s.action.start_y) << ',' << fmt_real(s.action.end_x) << ','
            << fmt_real(s.action.end_y) << ',' << fmt_real(s.attributed) << ','
            << fmt_real(s.event_delta) << '\n';
      }
      emit("case.csv", csv.str());
      summary = std::to_string(steps.size()) + " actions plotted";
      break;
    }
  }
  return files;
}

void write_ablation_csv(std::ostream& out, const AblationGrid& grid, const std::vector<std::size_t>& ks,
                        AblationMetric metric) {
  out << "model";
  for (const char* split : {"train", "val"}) {
    for (std::size_t k : ks) out << ',' << split << "_k" << k;
  }
  out << '\n';
  for (ModelVariant v : {ModelVariant::kGcn, ModelVariant::kGat, ModelVariant::kTransformer}) {
    out << to_string(v);
    for (bool train_side : {true, false}) {
      for (std::size_t k : ks) {
        out << ',';
        auto it = grid.find({v, k});
        if (it == grid.end() || !it->second.ok) {
          out << "FAILED";
          continue;
        }
        const auto& cell = it->second;
        const double mae = train_side ? cell.train_mae : cell.val_mae;
        const double mse = train_side ? cell.train_mse : cell.val_mse;
        out << fmt_real(metric == AblationMetric::kMae   ? mae
                        : metric == AblationMetric::kMse ? mse
                                                         : mae + mse);
      }
    }
    out << '\n';
  }
}

}  // namespace goalnet
