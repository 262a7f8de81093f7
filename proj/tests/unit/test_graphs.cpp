#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "goalnet/error.hpp"
#include "goalnet/graphs.hpp"
#include "goalnet/synthetic.hpp"
#include "test_util.hpp"

using namespace goalnet;

namespace {

XtGrid flat_grid(double v) {
  XtGrid g = make_empty_grid(2, 1);
  g.value = {v, v};
  return g;
}

// Passes A(1) -> B(2) -> C(3), all team 7, one second apart.
MatchStream three_passes() {
  std::vector<SpadlAction> a(3);
  for (std::size_t i = 0; i < 3; ++i) {
    a[i].game_id = 4;
    a[i].team_id = 7;
    a[i].action_type = ActionType::kPass;
    a[i].player_id = static_cast<PlayerId>(i + 1);
    a[i].time_s = static_cast<double>(i);
    a[i].start_x = 52.5;
    a[i].start_y = 34.0;
    a[i].end_x = 60.0 + static_cast<double>(i);
    a[i].end_y = 30.0;
  }
  a[2].action_type = ActionType::kShot;
  return prepare_match(std::move(a), flat_grid(0.1));
}

PlayerTable table_without(PlayerId missing) {
  PlayerTable t;
  for (PlayerId id = 1; id <= 3; ++id) {
    if (id == missing) continue;
    t.features[id].fill(static_cast<double>(id) / 10.0);
  }
  t.population_mean.fill(0.5);
  return t;
}

std::vector<EventGraph> numbered(std::size_t n) {
  std::vector<EventGraph> gs(n);
  for (std::size_t i = 0; i < n; ++i) gs[i].event_id = static_cast<EventId>(i);
  return gs;
}

std::set<EventId> ids(const std::vector<EventGraph>& gs) {
  std::set<EventId> s;
  for (const auto& g : gs) s.insert(g.event_id);
  return s;
}

}  // namespace

TEST_CASE("two consecutive passes with k = 1 give three nodes and two edges") {
  const auto s = three_passes();
  const auto g = build_graph(s, 1, 1, table_without(0));
  CHECK(g.node_ids == std::vector<PlayerId>{1, 2, 3});
  REQUIRE(g.edges.size() == 2);
  CHECK(g.edges[0] == GraphEdge{0, 1});
  CHECK(g.edges[1] == GraphEdge{1, 2});
  // self-loops plus the edge, row-normalized
  CHECK(g.adjacency(0, 0) == 0.5);
  CHECK(g.adjacency(0, 1) == 0.5);
  CHECK(g.adjacency(1, 2) == 0.5);
  CHECK(g.adjacency(2, 2) == 1.0);
  CHECK(g.adjacency(2, 0) == 0.0);
  validate_graph(g);
}

TEST_CASE("k = 0 keeps only the current event") {
  const auto g = build_graph(three_passes(), 1, 0, table_without(0));
  CHECK(g.node_ids == std::vector<PlayerId>{2, 3});
  CHECK(g.num_edges() == 1);
  CHECK(g.window_k == 0);
}

TEST_CASE("window clamps at the start of the stream") {
  const auto g = build_graph(three_passes(), 0, 5, table_without(0));
  CHECK(g.window_k == 0);
  CHECK(g.node_ids == std::vector<PlayerId>{1, 2});
}

TEST_CASE("an action without a recipient gives a self-edge") {
  const auto g = build_graph(three_passes(), 2, 0, table_without(0));
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edges[0] == GraphEdge{0, 0});
  CHECK(g.adjacency(0, 0) == 1.0);
}

TEST_CASE("players without stats get the population mean and are counted") {
  const auto g = build_graph(three_passes(), 1, 1, table_without(2));
  CHECK(g.imputed_nodes == 1);
  CHECK(g.node_features(1, 0) == 0.5);
  CHECK(g.node_features(0, 0) == 0.1);
}

TEST_CASE("edge encoding arithmetic") {
  SpadlAction a;
  a.start_x = 52.5;
  a.start_y = 34.0;
  a.end_x = 105.0;
  a.end_y = 0.0;
  a.time_s = 100.0;
  const auto f = encode_edge(a, {0, 0.2, -0.05}, {100.0});
  CHECK(f.start_x == 0.5);
  CHECK(f.start_y == 0.5);
  CHECK(f.end_x == 1.0);
  CHECK(f.dt_prev == 0.0);
  CHECK(f.xt_value == 0.2);
  CHECK(f.delta_xt == -0.05);
  a.action_type = ActionType::kTackle;
  a.result = ActionResult::kFail;
  const auto t = encode_edge(a, {}, {1000.0});
  CHECK(t.result_code == 0.0);
  CHECK(t.dt_prev == 1.0);  // clipped at 60 s
  CHECK(t.type_code == doctest::Approx(9.0 / 23.0));
}

TEST_CASE("split sizes round the training side up") {
  auto d = make_dataset(numbered(100), 0.8, 1);
  CHECK(d.train.size() == 80);
  CHECK(d.validation.size() == 20);
  d = make_dataset(numbered(3), 0.5, 9);
  CHECK(d.train.size() == 2);
  CHECK(d.validation.size() == 1);
}

TEST_CASE("split membership is a deterministic partition") {
  const auto gs = numbered(57);
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto a = make_dataset(gs, 0.8, seed);
    const auto b = make_dataset(gs, 0.8, seed);
    CHECK(ids(a.train) == ids(b.train));
    auto all = ids(a.train);
    for (EventId e : ids(a.validation)) CHECK(all.insert(e).second);
    CHECK(all.size() == 57);
  }
  CHECK_THROWS_AS((void)make_dataset({}, 0.8, 1), Error);
  CHECK_THROWS_AS((void)make_dataset(gs, 1.0, 1), ConfigError);
}

TEST_CASE("match split keeps whole matches together") {
  auto gs = numbered(40);
  for (std::size_t i = 0; i < gs.size(); ++i) gs[i].match_id = static_cast<MatchId>(i % 5);
  const auto d = make_dataset(gs, 0.6, 3, SplitUnit::kMatch);
  std::set<MatchId> tm, vm;
  for (const auto& g : d.train) tm.insert(g.match_id);
  for (const auto& g : d.validation) vm.insert(g.match_id);
  CHECK(tm.size() == 3);
  CHECK(vm.size() == 2);
  for (MatchId m : tm) CHECK_FALSE(vm.contains(m));
}

TEST_CASE("batches are consecutive and the last may be short") {
  const auto gs = numbered(130);
  const auto b = batch(gs, 64);
  REQUIRE(b.size() == 3);
  CHECK(b[0].size() == 64);
  CHECK(b[1].size() == 64);
  CHECK(b[2].size() == 2);
  CHECK(b[1].front().event_id == 64);
  CHECK(batch(gs, 1).size() == 130);
  CHECK_THROWS_AS((void)batch(gs, 0), ConfigError);
}

TEST_CASE("random graphs satisfy the structural invariants") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    const auto g = random_graph(rng);
    validate_graph(g);
    for (std::size_t r = 0; r < g.num_nodes(); ++r) {
      double s = 0;
      for (double v : g.adjacency.row(r)) s += v;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(g.adjacency(r, r) > 0.0);
    }
  }
}

TEST_CASE("invalid graphs are rejected with the violated invariant") {
  std::mt19937_64 rng(2);
  auto g = random_graph(rng, 3, 2);
  g.edges[0].dst = 7;
  CHECK_THROWS_WITH_AS(validate_graph(g), doctest::Contains("out of range"), Error);
  g = random_graph(rng, 3, 2);
  g.node_features = Matrix(3, 11);
  CHECK_THROWS_AS(validate_graph(g), Error);
}

TEST_CASE("ndjson round trip is exact") {
  std::mt19937_64 rng(4);
  std::vector<EventGraph> gs;
  for (int i = 0; i < 20; ++i) gs.push_back(random_graph(rng));
  std::stringstream buf;
  write_graphs_ndjson(buf, gs);
  CHECK(read_graphs_ndjson(buf) == gs);
}

TEST_CASE("a stale schema version is rejected") {
  std::mt19937_64 rng(4);
  std::string line = graph_to_ndjson_line(random_graph(rng));
  const auto at = line.find("\"schema_version\":1");
  REQUIRE(at != std::string::npos);
  line.replace(at, 18, "\"schema_version\":0");
  CHECK_THROWS_AS((void)graph_from_ndjson_line(line), SchemaError);
}

TEST_CASE("fixture corpus builds one graph per action") {
  std::vector<MatchStream> ms;
  std::size_t actions = 0;
  std::vector<SpadlAction> all;
  for (const char* f : {"100001.json", "100002.json"}) {
    auto a = to_spadl(parse_events(testutil::fixture_dir() / "events" / f));
    all.insert(all.end(), a.begin(), a.end());
  }
  const XtGrid grid = fit_grid(all);
  for (auto& m : split_by_match(all)) {
    actions += m.size();
    ms.push_back(prepare_match(std::move(m), grid));
  }
  const auto table = PlayerTable::from_stats(load_player_stats(testutil::fixture_dir() / "players.csv"));
  const auto gs = build_corpus_graphs(ms, 5, table);
  CHECK(gs.size() == actions);
  std::size_t imputed = 0;
  for (const auto& g : gs) {
    validate_graph(g);
    CHECK(g.num_nodes() <= kMaxGraphNodes);
    imputed += g.imputed_nodes;
  }
  CHECK(imputed > 0);  // player 311 has no stats row
}
