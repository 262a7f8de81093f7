#include <cmath>
#include <sstream>

#include "centrality_oracle.hpp"
#include "doctest.h"
#include "goalnet/centrality.hpp"
#include "goalnet/synthetic.hpp"
#include "test_util.hpp"

using namespace goalnet;

TEST_CASE("path graph a - b - c") {
  const auto c = centralities(SimpleGraph::from_edges(3, {{0, 1}, {1, 2}}));
  CHECK(c[1].degree == 2.0);
  CHECK(c[1].betweenness == 1.0);
  CHECK(c[0].betweenness == 0.0);
  CHECK(c[1].closeness == 1.0);
  CHECK(c[0].closeness == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("isolated nodes have zero closeness, duplicates and loops are ignored") {
  const auto g = SimpleGraph::from_edges(3, {{0, 1}, {1, 0}, {2, 2}});
  CHECK(g.neighbours[0] == std::vector<std::size_t>{1});
  CHECK(g.neighbours[2].empty());
  const auto c = centralities(g);
  CHECK(c[2].closeness == 0.0);
  CHECK(c[0].closeness == 1.0);
}

TEST_CASE("brute-force oracle on every graph with up to 5 nodes") {
  for (std::size_t n = 1; n <= 5; ++n) {
    oracle::for_each_graph(n, [&](const auto& edges, bool) {
      const auto got = centralities(SimpleGraph::from_edges(n, edges));
      const auto want = oracle::brute_force(n, edges);
      for (std::size_t v = 0; v < n; ++v) {
        CHECK(got[v].degree == want[v].degree);
        CHECK(std::abs(got[v].betweenness - want[v].betweenness) <= 1e-12);
        CHECK(std::abs(got[v].closeness - want[v].closeness) <= 1e-12);
      }
    });
  }
}

TEST_CASE("passing network links completed passes") {
  std::vector<SpadlAction> m(4);
  for (auto& a : m) {
    a.game_id = 3;
    a.team_id = 1;
    a.action_type = ActionType::kPass;
  }
  m[0].player_id = 10;
  m[1].player_id = 20;
  m[2].player_id = 10;
  m[3].player_id = 30;
  m[3].team_id = 2;
  const std::vector<std::optional<PlayerId>> rec = {20, 10, std::nullopt, std::nullopt};
  const auto net = passing_network(m, rec);
  CHECK(net.players == std::vector<PlayerId>{10, 20, 30});
  CHECK(net.teams == std::vector<TeamId>{1, 1, 2});
  CHECK(net.graph.neighbours[0] == std::vector<std::size_t>{1});
  CHECK(net.graph.neighbours[2].empty());
  REQUIRE(net.weights.size() == 1);
  CHECK(net.weights[0].second == 2);

  const auto rows = centrality_report(net);
  CHECK(rows.size() == 3);
  std::ostringstream out;
  write_centrality_csv(out, rows);
  CHECK(out.str().rfind("match_id,player_id,team_id,degree,betweenness,closeness\n", 0) == 0);
}

TEST_CASE("centrality features are appended in [0, 1]") {
  std::mt19937_64 rng(3);
  EventGraph g = random_graph(rng, 3, 2);
  g.match_id = 3;
  g.node_ids = {10, 20, 99};
  PassingNetwork net;
  net.match_id = 3;
  net.players = {10, 20, 30};
  net.teams = {1, 1, 1};
  net.graph = SimpleGraph::from_edges(3, {{0, 1}, {1, 2}});
  std::vector<EventGraph> gs = {g};
  append_centrality_features(gs, {net});
  const Matrix& f = gs[0].node_features;
  REQUIRE(f.cols() == kNodeFeatureDim + kCentralityFeatureDim);
  // node 20 is the middle of the path: degree 2/2, betweenness 1/1, closeness 1
  CHECK(f(1, 10) == 1.0);
  CHECK(f(1, 11) == 1.0);
  CHECK(f(1, 12) == 1.0);
  CHECK(f(0, 10) == 0.5);
  // player 99 is not in the network
  CHECK(f(2, 10) == 0.0);
  CHECK(f(2, 12) == 0.0);
  validate_graph(gs[0]);
}
