#include "goalnet/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "goalnet/error.hpp"
#include "json.hpp"

namespace goalnet {

std::array<double, kEdgeFeatureDim> EdgeFeature::to_array() const {
  return {type_code, result_code, start_x,  start_y,       end_x,
          end_y,     xt_value,    delta_xt, t_since_start, dt_prev};
}

EdgeFeature encode_edge(const SpadlAction& a, const XtLabel& label, const WindowContext& ctx) {
  EdgeFeature f;
  f.type_code = static_cast<double>(a.action_type) / static_cast<double>(kActionVocabularySize);
  f.result_code = a.result == ActionResult::kSuccess ? 1.0 : 0.0;
  f.start_x = a.start_x / kPitchLength;
  f.start_y = a.start_y / kPitchWidth;
  f.end_x = a.end_x / kPitchLength;
  f.end_y = a.end_y / kPitchWidth;
  f.xt_value = label.xt_value;
  f.delta_xt = label.delta_xt;
  f.t_since_start = a.time_s / 5400.0;
  f.dt_prev = std::clamp(ctx.newest_time_s - a.time_s, 0.0, 60.0) / 60.0;
  return f;
}

Matrix normalized_adjacency(std::size_t n, std::span<const GraphEdge> edges) {
  Matrix a = Matrix::identity(n);
  for (const auto& e : edges) a(e.src, e.dst) = 1.0;
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (double v : a.row(r)) s += v;
    for (double& v : a.row(r)) v /= s;
  }
  return a;
}

void validate_graph(const EventGraph& g) {
  const std::size_t n = g.num_nodes();
  auto fail = [&](const std::string& what) {
    throw Error("graph " + std::to_string(g.event_id) + ": " + what);
  };
  if (n == 0) fail("no nodes");
  if (n > kMaxGraphNodes) fail("more than 22 nodes");
  if (g.node_teams.size() != n || g.node_roles.size() != n || g.node_positions.size() != n) {
    fail("per-node arrays disagree on |V|");
  }
  if (g.node_features.rows() != n || (g.node_features.cols() != kNodeFeatureDim &&
                                      g.node_features.cols() != kNodeFeatureDim + kCentralityFeatureDim)) {
    fail("node_features must be |V| x 10 or |V| x 13");
  }
  if (g.adjacency.rows() != n || g.adjacency.cols() != n) fail("adjacency must be |V| x |V|");
  if (g.edge_features.rows() != g.edges.size() || g.edge_features.cols() != kEdgeFeatureDim) {
    fail("edge_features must be |E| x 10");
  }
  for (const auto& e : g.edges) {
    if (e.src >= n || e.dst >= n) fail("edge endpoint out of range");
  }
  if (!std::is_sorted(g.node_ids.begin(), g.node_ids.end())) fail("node ids not ascending");
  for (double v : g.node_features.data()) {
    if (!std::isfinite(v)) fail("non-finite node feature");
  }
  for (double v : g.edge_features.data()) {
    if (!std::isfinite(v)) fail("non-finite edge feature");
  }
  if (!std::isfinite(g.label)) fail("non-finite label");
}

PlayerTable PlayerTable::from_stats(const std::map<PlayerId, PlayerSeasonStats>& stats) {
  PlayerTable t;
  auto norm = normalize_per90(stats);
  t.features = std::move(norm.features);
  t.population_mean = norm.population_mean;
  for (const auto& [id, s] : stats) t.roles[id] = s.role;
  return t;
}

MatchStream prepare_match(std::vector<SpadlAction> actions, const XtGrid& grid) {
  MatchStream m;
  m.recipients = infer_recipients(actions);
  m.labels = label_match(actions, grid);
  m.actions = std::move(actions);
  return m;
}

namespace {
std::set<PlayerId> participants(const MatchStream& s, std::size_t first, std::size_t last) {
  std::set<PlayerId> ids;
  for (std::size_t j = first; j <= last; ++j) {
    ids.insert(s.actions[j].player_id);
    if (s.recipients[j]) ids.insert(*s.recipients[j]);
  }
  return ids;
}
}  // namespace

EventGraph build_graph(const MatchStream& stream, std::size_t index, std::size_t k,
                       const PlayerTable& players) {
  if (index >= stream.actions.size()) {
    throw Error("build_graph: index " + std::to_string(index) + " outside stream of " +
                std::to_string(stream.actions.size()));
  }
  std::size_t first = index >= k ? index - k : 0;
  auto ids = participants(stream, first, index);
  while (ids.size() > kMaxGraphNodes && first < index) {
    ++first;
    ids = participants(stream, first, index);
  }

  EventGraph g;
  const SpadlAction& current = stream.actions[index];
  g.event_id = make_event_id(current.game_id, index);
  g.match_id = current.game_id;
  g.event_index = index;
  g.window_k = index - first;
  g.label = stream.labels[index].delta_xt;
  g.node_ids.assign(ids.begin(), ids.end());

  const std::size_t n = g.node_ids.size();
  auto node_of = [&](PlayerId id) {
    return static_cast<std::size_t>(
        std::lower_bound(g.node_ids.begin(), g.node_ids.end(), id) - g.node_ids.begin());
  };

  g.node_teams.assign(n, 0);
  g.node_roles.assign(n, Role::kUnknown);
  g.node_positions.assign(n, Point{});
  std::vector<int> position_rank(n, 0);  // 2 = from own action, 1 = as recipient
  g.node_features = Matrix(n, kNodeFeatureDim);

  const WindowContext ctx{current.time_s};
  g.edge_features = Matrix(index - first + 1, kEdgeFeatureDim);
  for (std::size_t j = first; j <= index; ++j) {
    const SpadlAction& a = stream.actions[j];
    const std::size_t src = node_of(a.player_id);
    const std::size_t dst = stream.recipients[j] ? node_of(*stream.recipients[j]) : src;
    const std::size_t row = g.edges.size();
    g.edges.push_back({src, dst});
    const auto f = encode_edge(a, stream.labels[j], ctx).to_array();
    std::copy(f.begin(), f.end(), g.edge_features.row(row).begin());

    // Later events overwrite earlier ones, so the newest observation wins.
    const Point end{a.end_x / kPitchLength, a.end_y / kPitchWidth};
    g.node_teams[src] = a.team_id;
    g.node_positions[src] = end;
    position_rank[src] = 2;
    if (dst != src) {
      g.node_teams[dst] = a.team_id;
      if (position_rank[dst] < 2) {
        g.node_positions[dst] = end;
        position_rank[dst] = 1;
      }
    }
  }

  for (std::size_t v = 0; v < n; ++v) {
    const PlayerId id = g.node_ids[v];
    const FeatureVector* f = &players.population_mean;
    if (auto it = players.features.find(id); it != players.features.end()) {
      f = &it->second;
    } else {
      ++g.imputed_nodes;
    }
    std::copy(f->begin(), f->end(), g.node_features.row(v).begin());
    if (auto it = players.roles.find(id); it != players.roles.end()) g.node_roles[v] = it->second;
  }

  g.adjacency = normalized_adjacency(n, g.edges);
  return g;
}

std::vector<EventGraph> build_corpus_graphs(const std::vector<MatchStream>& matches,
                                            std::size_t k, const PlayerTable& players) {
  std::vector<EventGraph> out;
  for (const auto& m : matches) {
    for (std::size_t i = 0; i < m.actions.size(); ++i) out.push_back(build_graph(m, i, k, players));
  }
  return out;
}

// ---------------------------------------------------------------- datasets

namespace {
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(v[i - 1], v[pick(rng)]);
  }
}

std::size_t train_count(std::size_t n, double frac) {
  return std::min(n, static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n) - 1e-9)));
}
}  // namespace

Dataset make_dataset(const std::vector<EventGraph>& graphs, double split_frac, std::uint64_t seed,
                     SplitUnit unit) {
  if (graphs.empty()) throw Error("make_dataset: empty corpus");
  if (!(split_frac > 0.0 && split_frac < 1.0)) {
    throw ConfigError("make_dataset: split fraction must lie in (0,1)");
  }
  Dataset d;
  if (unit == SplitUnit::kGraph) {
    std::vector<std::size_t> order(graphs.size());
    std::iota(order.begin(), order.end(), 0);
    seeded_shuffle(order, seed);
    const std::size_t n_train = train_count(order.size(), split_frac);
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i < n_train ? d.train : d.validation).push_back(graphs[order[i]]);
    }
    return d;
  }

  std::vector<MatchId> matches;
  for (const auto& g : graphs) matches.push_back(g.match_id);
  std::sort(matches.begin(), matches.end());
  matches.erase(std::unique(matches.begin(), matches.end()), matches.end());
  seeded_shuffle(matches, seed);
  const std::size_t n_train = train_count(matches.size(), split_frac);
  std::set<MatchId> train_matches(matches.begin(), matches.begin() + n_train);
  for (const auto& g : graphs) {
    (train_matches.contains(g.match_id) ? d.train : d.validation).push_back(g);
  }
  return d;
}

std::vector<std::span<const EventGraph>> batch(std::span<const EventGraph> graphs,
                                               std::size_t batch_size) {
  if (batch_size == 0) throw ConfigError("batch size must be >= 1");
  std::vector<std::span<const EventGraph>> out;
  for (std::size_t i = 0; i < graphs.size(); i += batch_size) {
    out.push_back(graphs.subspan(i, std::min(batch_size, graphs.size() - i)));
  }
  return out;
}

// ---------------------------------------------------------------- persistence

namespace {
using nlohmann::json;

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, std::size_t cols_if_empty) {
  const std::size_t r = j.size();
  const std::size_t c = r == 0 ? cols_if_empty : j[0].size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : j) {
    if (row.size() != c) throw SchemaError("graph record: ragged matrix");
    for (const auto& v : row) data.push_back(v.get<double>());
  }
  return Matrix(r, c, std::move(data));
}
}  // namespace

std::string graph_to_ndjson_line(const EventGraph& g) {
  nlohmann::ordered_json j;
  j["schema_version"] = kGraphSchemaVersion;
  j["event_id"] = g.event_id;
  j["match_id"] = g.match_id;
  j["event_index"] = g.event_index;
  j["window_k"] = g.window_k;
  j["label"] = g.label;
  j["node_ids"] = g.node_ids;
  j["node_teams"] = g.node_teams;
  std::vector<std::string> roles;
  for (Role r : g.node_roles) roles.emplace_back(to_string(r));
  j["node_roles"] = roles;
  json pos = json::array();
  for (const auto& p : g.node_positions) pos.push_back({p.x, p.y});
  j["node_positions"] = pos;
  j["node_features"] = matrix_json(g.node_features);
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({e.src, e.dst});
  j["edges"] = edges;
  j["edge_features"] = matrix_json(g.edge_features);
  j["imputed_nodes"] = g.imputed_nodes;
  return j.dump();
}

EventGraph graph_from_ndjson_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("bad graph record: ") + e.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kGraphSchemaVersion) {
      throw SchemaError("graph record schema_version " + std::to_string(version) +
                        " does not match supported version " +
                        std::to_string(kGraphSchemaVersion));
    }
    EventGraph g;
    g.event_id = j.at("event_id").get<EventId>();
    g.match_id = j.at("match_id").get<MatchId>();
    g.event_index = j.at("event_index").get<std::size_t>();
    g.window_k = j.at("window_k").get<std::size_t>();
    g.label = j.at("label").get<double>();
    g.node_ids = j.at("node_ids").get<std::vector<PlayerId>>();
    g.node_teams = j.at("node_teams").get<std::vector<TeamId>>();
    for (const auto& r : j.at("node_roles")) g.node_roles.push_back(role_from_string(r.get<std::string>()));
    for (const auto& p : j.at("node_positions")) {
      g.node_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    g.node_features = matrix_from_json(j.at("node_features"), kNodeFeatureDim);
    for (const auto& e : j.at("edges")) {
      g.edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
    }
    g.edge_features = matrix_from_json(j.at("edge_features"), kEdgeFeatureDim);
    g.imputed_nodes = j.at("imputed_nodes").get<std::size_t>();
    g.adjacency = normalized_adjacency(g.num_nodes(), g.edges);
    validate_graph(g);
    return g;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("graph record: ") + e.what());
  }
}

void write_graphs_ndjson(std::ostream& out, const std::vector<EventGraph>& graphs) {
  for (const auto& g : graphs) out << graph_to_ndjson_line(g) << '\n';
}

std::vector<EventGraph> read_graphs_ndjson(std::istream& in) {
  std::vector<EventGraph> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(graph_from_ndjson_line(line));
    } catch (const SchemaError& e) {
      throw SchemaError("graphs line " + std::to_string(n) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError("graphs line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace goalnet
