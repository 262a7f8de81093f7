// goalnet: command-line front end for the valuation pipeline.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "goalnet/config.hpp"
#include "goalnet/error.hpp"
#include "goalnet/pipeline.hpp"

namespace {

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string stage_dir;
  bool quiet = false;
  bool force = false;
};

struct Overrides {
  std::string model;
  std::string rank_mode;
  std::vector<std::size_t> k_values;
  std::optional<std::size_t> window_k;
};

goalnet::RunConfig effective_config(const Globals& g, const Overrides& o) {
  goalnet::RunConfig c = g.config_path.empty() ? goalnet::RunConfig{} : goalnet::load_config(g.config_path);
  if (g.seed) c.seed = *g.seed;
  if (!g.stage_dir.empty()) c.paths.artifacts = g.stage_dir;
  if (!o.model.empty()) c.model.variant = goalnet::model_variant_from_string(o.model);
  if (!o.rank_mode.empty()) c.rank.mode = goalnet::rank_mode_from_string(o.rank_mode);
  if (!o.k_values.empty()) c.ablation_k = o.k_values;
  if (o.window_k) c.window_k = *o.window_k;
  // round-trip through the validator so overrides get the same range checks
  return goalnet::parse_config(goalnet::config_to_json(c));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Player valuation from event graphs: ingest, xT labels, GNN training, attribution, rankings"};
  app.require_subcommand(1);
  Globals g;
  Overrides o;
  app.add_option("--config", g.config_path, "JSON run configuration (defaults when omitted)");
  app.add_option("--seed", g.seed, "Override the configured seed");
  app.add_option("--stage-dir", g.stage_dir, "Artifact directory (overrides paths.artifacts)");
  app.add_flag("--quiet,-q", g.quiet, "Only print errors");
  app.add_flag("--force", g.force, "Run stages even when their inputs are unchanged");

  std::vector<std::pair<CLI::App*, goalnet::Stage>> stage_cmds;
  const std::pair<const char*, const char*> descriptions[] = {
      {"fetch", "Download match list and event files into the cache"},
      {"ingest", "Parse event files into SPADL actions"},
      {"xt-fit", "Fit the expected-threat grid"},
      {"build-graphs", "Build windowed event graphs with labels"},
      {"train", "Train the configured model"},
      {"evaluate", "Compute MSE/MAE on the train and validation split"},
      {"attribute", "Distribute event values over players; passing-network centralities"},
      {"rank", "Season rankings (overall and per team)"},
      {"ablate", "Train every model for every window size and write loss tables"},
      {"plot-case", "Render an attributed action sequence as SVG"},
  };
  for (const auto& [name, desc] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, desc);
    stage_cmds.emplace_back(sub, goalnet::stage_from_string(name));
  }
  for (auto& [sub, stage] : stage_cmds) {
    if (stage == goalnet::Stage::kTrain || stage == goalnet::Stage::kEvaluate) {
      sub->add_option("--model", o.model, "gcn | gat | transformer");
    }
    if (stage == goalnet::Stage::kBuildGraphs) sub->add_option("-k,--window", o.window_k, "Window size k");
    if (stage == goalnet::Stage::kRank) sub->add_option("--mode", o.rank_mode, "total | per90");
    if (stage == goalnet::Stage::kAblate) {
      sub->add_option("--k", o.k_values, "Window sizes (default from config)")->delimiter(',');
    }
  }
  std::vector<std::string> run_stages;
  CLI::App* run = app.add_subcommand("run", "Run several stages in pipeline order");
  run->add_option("--stages", run_stages, "Comma-separated stages (default: ingest through plot-case)")
      ->delimiter(',');
  CLI::App* show = app.add_subcommand("config", "Print the effective configuration");
  CLI::App* verify = app.add_subcommand("verify", "Re-hash artifacts against the run manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : goalnet::kExitConfig;
  }

  try {
    const goalnet::RunConfig config = effective_config(g, o);
    if (show->parsed()) {
      std::cout << goalnet::config_to_json(config);
      return goalnet::kExitOk;
    }
    auto logger = [&](const std::string& msg) {
      if (!g.quiet) std::cerr << msg << '\n';
    };
    goalnet::Pipeline pipeline(config, config.paths.artifacts, logger);

    if (verify->parsed()) {
      const auto bad = pipeline.verify_manifest();
      for (const auto& f : bad) std::cerr << "digest mismatch: " << f << '\n';
      if (!g.quiet && bad.empty()) std::cerr << "all artifacts match the manifest\n";
      return bad.empty() ? goalnet::kExitOk : goalnet::kExitFailure;
    }

    std::vector<goalnet::Stage> stages;
    if (run->parsed()) {
      if (run_stages.empty()) {
        stages = goalnet::default_run_stages();
      } else {
        for (const auto& s : run_stages) stages.push_back(goalnet::stage_from_string(s));
      }
    } else {
      for (auto& [sub, stage] : stage_cmds) {
        if (sub->parsed()) stages.push_back(stage);
      }
    }
    pipeline.run(stages, g.force);
    return goalnet::kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return goalnet::exit_code_for(e);
  }
}
