#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "goalnet/error.hpp"
#include "goalnet/pipeline.hpp"
#include "test_util.hpp"

using namespace goalnet;

namespace {

RunConfig quick_config() {
  RunConfig c;
  c.paths.events = (testutil::fixture_dir() / "events").string();
  c.paths.players = (testutil::fixture_dir() / "players.csv").string();
  c.training.epochs = 2;
  c.model.hidden_dim = 16;
  c.model.ffn_dim = 16;
  return c;
}

}  // namespace

TEST_CASE("stage names round trip and unknown names are config errors") {
  for (Stage s : all_stages()) CHECK(stage_from_string(to_string(s)) == s);
  CHECK_THROWS_AS((void)stage_from_string("bogus"), ConfigError);
  CHECK(default_run_stages().front() == Stage::kIngest);
  CHECK(default_run_stages().back() == Stage::kPlotCase);
}

TEST_CASE("errors map to exit codes") {
  CHECK(exit_code_for(ConfigError("x")) == kExitConfig);
  CHECK(exit_code_for(MissingArtifactError("x")) == kExitMissingArtifact);
  CHECK(exit_code_for(NumericError("x")) == kExitNumeric);
  CHECK(exit_code_for(ParseError("x")) == kExitFailure);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitFailure);
}

TEST_CASE("a stage without its inputs names the stage to run first") {
  Pipeline p(quick_config(), testutil::scratch_dir("pipeline_empty"));
  CHECK_THROWS_WITH_AS(p.run(Stage::kTrain), doctest::Contains("run build-graphs first"),
                       MissingArtifactError);
  CHECK_THROWS_WITH_AS(p.run(Stage::kXtFit), doctest::Contains("run ingest first"),
                       MissingArtifactError);
}

TEST_CASE("full run, skip on re-run, re-run after tampering") {
  const auto dir = testutil::scratch_dir("pipeline_full");
  Pipeline p(quick_config(), dir);
  const auto first = p.run(default_run_stages());
  for (const auto& r : first) CHECK_FALSE(r.skipped);
  for (const char* f : {"actions.ndjson", "xt_grid.json", "graphs.ndjson", "model.ckpt", "train_log.csv",
                        "metrics.json", "ledger.csv", "centrality.csv", "ranking.csv",
                        "ranking_by_team.csv", "ranking.txt", "case.svg", "case.csv", "manifest.json"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK(p.verify_manifest().empty());

  const std::string ranking = testutil::slurp(dir / "ranking.csv");
  const auto second = p.run(default_run_stages());
  for (const auto& r : second) CHECK(r.skipped);
  CHECK(testutil::slurp(dir / "ranking.csv") == ranking);

  std::ofstream(dir / "ranking.csv", std::ios::app) << "tampered\n";
  const auto bad = p.verify_manifest();
  REQUIRE(bad.size() == 1);
  CHECK(bad[0] == "ranking.csv");
  CHECK_FALSE(p.run(Stage::kRank).skipped);
  CHECK(testutil::slurp(dir / "ranking.csv") == ranking);
  CHECK(p.verify_manifest().empty());

  CHECK_FALSE(p.run(Stage::kRank, true).skipped);

  // a config change invalidates the stage and everything downstream of its output
  RunConfig changed = quick_config();
  changed.window_k = 2;
  Pipeline q(changed, dir);
  CHECK(q.run(Stage::kIngest).skipped);
  CHECK(q.run(Stage::kXtFit).skipped);
  CHECK_FALSE(q.run(Stage::kBuildGraphs).skipped);
  CHECK_FALSE(q.run(Stage::kTrain).skipped);
}

TEST_CASE("a checkpoint written for another graph schema is refused") {
  const auto dir = testutil::scratch_dir("pipeline_schema");
  Pipeline p(quick_config(), dir);
  p.run({Stage::kIngest, Stage::kXtFit, Stage::kBuildGraphs});
  std::string graphs = testutil::slurp(dir / "graphs.ndjson");
  for (auto at = graphs.find("\"schema_version\":1"); at != std::string::npos;
       at = graphs.find("\"schema_version\":1", at))
    graphs.replace(at, 18, "\"schema_version\":9");
  std::ofstream(dir / "graphs.ndjson", std::ios::binary | std::ios::trunc) << graphs;
  CHECK_THROWS_AS(p.run(Stage::kTrain), SchemaError);
}

TEST_CASE("ablation tables: layout and combined = mae + mse") {
  AblationGrid grid;
  const std::vector<std::size_t> ks = {1, 3};
  for (ModelVariant v : {ModelVariant::kGcn, ModelVariant::kGat, ModelVariant::kTransformer})
    for (std::size_t k : ks) grid[{v, k}] = {true, "", 0.1 * k, 0.01 * k, 0.2 * k, 0.03 * k};
  grid[{ModelVariant::kGat, 3}].ok = false;
  std::ostringstream out;
  write_ablation_csv(out, grid, ks, AblationMetric::kCombined);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "model,train_k1,train_k3,val_k1,val_k3");
  std::getline(in, line);
  CHECK(line.rfind("gcn,", 0) == 0);
  CHECK(std::stod(line.substr(4)) == 0.1 + 0.01);
  std::getline(in, line);
  CHECK(line.find("FAILED") != std::string::npos);
  std::getline(in, line);
  CHECK(line.rfind("transformer,", 0) == 0);
}
