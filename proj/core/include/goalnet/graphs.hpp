#pragma once

// Event graphs: players involved in the current event and the k events
// before it, with one directed edge per interaction.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "goalnet/ingest.hpp"
#include "goalnet/stats.hpp"
#include "goalnet/tensor.hpp"
#include "goalnet/xt.hpp"

namespace goalnet {

inline constexpr std::size_t kEdgeFeatureDim = 10;
inline constexpr std::size_t kMaxGraphNodes = 22;
inline constexpr int kGraphSchemaVersion = 1;
// Optional normalized degree, betweenness and closeness appended to the node
// features.
inline constexpr std::size_t kCentralityFeatureDim = 3;

// Edge feature layout (d_e = 10):
//   0 type_code      action type index / vocabulary size
//   1 result_code    1 success, 0 fail
//   2,3 start_x/y    divided by (105, 68)
//   4,5 end_x/y      divided by (105, 68)
//   6 xt_value       xT of the action's end zone
//   7 delta_xt       the action's delta xT label
//   8 t_since_start  seconds since kick-off / 5400
//   9 dt_prev        seconds to the window's newest event, clipped at 60, / 60
struct EdgeFeature {
  double type_code = 0;
  double result_code = 0;
  double start_x = 0;
  double start_y = 0;
  double end_x = 0;
  double end_y = 0;
  double xt_value = 0;
  double delta_xt = 0;
  double t_since_start = 0;
  double dt_prev = 0;

  std::array<double, kEdgeFeatureDim> to_array() const;
};

struct WindowContext {
  double newest_time_s = 0.0;  // time of the event the graph is built for
};

EdgeFeature encode_edge(const SpadlAction& action, const XtLabel& label, const WindowContext& ctx);

struct GraphEdge {
  std::size_t src = 0;  // node index
  std::size_t dst = 0;
  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct EventGraph {
  EventId event_id = 0;
  std::vector<PlayerId> node_ids;     // ascending
  std::vector<TeamId> node_teams;
  std::vector<Role> node_roles;
  std::vector<Point> node_positions;  // latest end coordinates in the window, in [0,1]^2
  Matrix node_features;               // |V| x 10, or |V| x 13 with centralities
  Matrix adjacency;                   // row-normalize(A + I), A[u][v] = 1 for edge u -> v
  std::vector<GraphEdge> edges;
  Matrix edge_features;               // |E| x 10, row i belongs to edges[i]
  double label = 0.0;                 // delta xT of the event at event_index

  MatchId match_id = 0;
  std::size_t event_index = 0;
  std::size_t window_k = 0;  // window actually used (may shrink to respect |V| <= 22)
  std::size_t imputed_nodes = 0;

  std::size_t num_nodes() const { return node_ids.size(); }
  std::size_t num_edges() const { return edges.size(); }

  friend bool operator==(const EventGraph&, const EventGraph&) = default;
};

// Row-normalized (A + I) for the given directed edges.
Matrix normalized_adjacency(std::size_t num_nodes, std::span<const GraphEdge> edges);

// Throws Error naming the first violated structural invariant.
void validate_graph(const EventGraph& g);

// Node feature lookup. Players without an entry get `population_mean` and are
// counted as imputed.
struct PlayerTable {
  std::map<PlayerId, FeatureVector> features;
  FeatureVector population_mean{};
  std::map<PlayerId, Role> roles;

  static PlayerTable from_stats(const std::map<PlayerId, PlayerSeasonStats>& stats);
};

// One match's actions with everything graph building needs.
struct MatchStream {
  std::vector<SpadlAction> actions;
  std::vector<std::optional<PlayerId>> recipients;
  std::vector<XtLabel> labels;
};

MatchStream prepare_match(std::vector<SpadlAction> actions, const XtGrid& grid);

// Graph for the event at `index` over events [index - k, index] (clamped at
// the stream start). If the participants exceed 22 players the window is
// shortened until they fit.
EventGraph build_graph(const MatchStream& stream, std::size_t index, std::size_t k,
                       const PlayerTable& players);

// All graphs of all matches, in (match, index) order.
std::vector<EventGraph> build_corpus_graphs(const std::vector<MatchStream>& matches,
                                            std::size_t k, const PlayerTable& players);

enum class SplitUnit { kGraph, kMatch };

struct Dataset {
  std::vector<EventGraph> train;
  std::vector<EventGraph> validation;
};

// Deterministic shuffle under `seed`, then the first ceil(frac * n) units go
// to training. Graph order inside each side follows the shuffled order.
Dataset make_dataset(const std::vector<EventGraph>& graphs, double split_frac, std::uint64_t seed,
                     SplitUnit unit = SplitUnit::kGraph);

// Consecutive, order-preserving chunks; the last one may be short.
std::vector<std::span<const EventGraph>> batch(std::span<const EventGraph> graphs,
                                               std::size_t batch_size);

// Newline-delimited JSON, one graph per line, each with "schema_version".
std::string graph_to_ndjson_line(const EventGraph& g);
EventGraph graph_from_ndjson_line(std::string_view line);
void write_graphs_ndjson(std::ostream& out, const std::vector<EventGraph>& graphs);
std::vector<EventGraph> read_graphs_ndjson(std::istream& in);

}  // namespace goalnet
