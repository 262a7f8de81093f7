#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "goalnet/centrality.hpp"
#include "goalnet/graphs.hpp"
#include "goalnet/ingest.hpp"
#include "goalnet/models.hpp"
#include "goalnet/optim.hpp"
#include "goalnet/stats.hpp"
#include "goalnet/synthetic.hpp"
#include "goalnet/xt.hpp"

using namespace goalnet;
namespace fs = std::filesystem;

namespace {

const fs::path kFixture = fs::path(GOALNET_SOURCE_DIR) / "data" / "fixture";

std::vector<SpadlAction> fixture_actions() {
  std::vector<SpadlAction> all;
  for (const char* f : {"100001.json", "100002.json"}) {
    auto a = to_spadl(parse_events(kFixture / "events" / f));
    all.insert(all.end(), a.begin(), a.end());
  }
  return all;
}

ModelConfig config_for(int variant) {
  ModelConfig c;
  c.variant = static_cast<ModelVariant>(variant);
  c.seed = 1;
  return c;
}

void BM_Forward(benchmark::State& state) {
  const GraphModel model(config_for(static_cast<int>(state.range(0))));
  std::mt19937_64 rng(1);
  const EventGraph g = random_graph(rng, static_cast<std::size_t>(state.range(1)), 2 * state.range(1));
  NoGradGuard guard;
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(g).prediction.item());
  state.SetLabel(std::string(to_string(model.config().variant)));
}
BENCHMARK(BM_Forward)->ArgsProduct({{0, 1, 2}, {6, 22}});

void BM_TrainStep(benchmark::State& state) {
  GraphModel model(config_for(static_cast<int>(state.range(0))));
  Adam adam;
  std::mt19937_64 rng(2);
  std::vector<EventGraph> batch;
  for (int i = 0; i < 16; ++i) batch.push_back(random_graph(rng, 10, 20));
  for (auto _ : state) {
    model.params().zero_grad();
    for (const auto& g : batch) scale(graph_loss(model, g), 1.0 / batch.size()).backward();
    adam.step(model.params());
  }
  state.SetLabel(std::string(to_string(model.config().variant)) + ", 16 graphs");
}
BENCHMARK(BM_TrainStep)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_XtFit(benchmark::State& state) {
  const auto actions = fixture_actions();
  for (auto _ : state) benchmark::DoNotOptimize(fit_grid(actions).value.data());
}
BENCHMARK(BM_XtFit)->Unit(benchmark::kMillisecond);

void BM_BuildGraphs(benchmark::State& state) {
  const auto actions = fixture_actions();
  const XtGrid grid = fit_grid(actions);
  const PlayerTable players = PlayerTable::from_stats(load_player_stats(kFixture / "players.csv"));
  std::vector<MatchStream> streams;
  for (auto& m : split_by_match(actions)) streams.push_back(prepare_match(std::move(m), grid));
  for (auto _ : state)
    benchmark::DoNotOptimize(build_corpus_graphs(streams, static_cast<std::size_t>(state.range(0)), players).size());
}
BENCHMARK(BM_BuildGraphs)->Arg(1)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_Centrality(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < 3 * n; ++i) edges.emplace_back(rng() % n, rng() % n);
  const SimpleGraph g = SimpleGraph::from_edges(n, edges);
  for (auto _ : state) benchmark::DoNotOptimize(centralities(g).data());
}
BENCHMARK(BM_Centrality)->Arg(14)->Arg(30);

}  // namespace

BENCHMARK_MAIN();
