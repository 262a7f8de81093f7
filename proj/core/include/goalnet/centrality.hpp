#pragma once

// Classical centralities on per-match passing networks.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "goalnet/graphs.hpp"
#include "goalnet/ingest.hpp"

namespace goalnet {

// Undirected simple graph on nodes 0..n-1.
struct SimpleGraph {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> neighbours;  // sorted, no duplicates, no self-loops

  // Duplicate and self edges are ignored.
  static SimpleGraph from_edges(std::size_t n,
                                const std::vector<std::pair<std::size_t, std::size_t>>& edges);
};

struct Centrality {
  double degree = 0.0;       // number of neighbours
  double betweenness = 0.0;  // over unordered pairs, unnormalized
  double closeness = 0.0;    // (n_c - 1) / sum of distances within the component; 0 if isolated
};

// Brandes' algorithm for betweenness, BFS distances for closeness.
std::vector<Centrality> centralities(const SimpleGraph& g);

// Players who acted in the match, linked when one completed a pass to the
// other (either direction); `weights` counts passes per linked pair.
struct PassingNetwork {
  MatchId match_id = 0;
  std::vector<PlayerId> players;  // ascending; node i is players[i]
  std::vector<TeamId> teams;
  SimpleGraph graph;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> weights;
};

PassingNetwork passing_network(const std::vector<SpadlAction>& match,
                               const std::vector<std::optional<PlayerId>>& recipients);

struct CentralityRow {
  MatchId match_id = 0;
  PlayerId player = 0;
  TeamId team = 0;
  Centrality value;
};

std::vector<CentralityRow> centrality_report(const PassingNetwork& net);

// match_id,player_id,team_id,degree,betweenness,closeness
void write_centrality_csv(std::ostream& out, const std::vector<CentralityRow>& rows);

// Appends each node's match centralities, scaled to [0, 1] (degree / (n - 1),
// betweenness / ((n - 1)(n - 2) / 2), closeness as is), as three extra node
// feature columns. Players missing from their match network get zeros.
void append_centrality_features(std::vector<EventGraph>& graphs,
                                const std::vector<PassingNetwork>& networks);

}  // namespace goalnet
