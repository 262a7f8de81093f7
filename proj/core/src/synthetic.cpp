#include "goalnet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "goalnet/error.hpp"

namespace goalnet {

EventGraph random_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t edges) {
  if (nodes == 0 || nodes > kMaxGraphNodes) throw Error("random_graph: node count out of range");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, nodes - 1);
  std::uniform_int_distribution<int> role(0, static_cast<int>(kRoleCount) - 1);

  EventGraph g;
  g.match_id = 1;
  g.window_k = 0;
  PlayerId id = 0;
  for (std::size_t v = 0; v < nodes; ++v) {
    id += 1 + static_cast<PlayerId>(pick(rng) % 3);
    g.node_ids.push_back(id);
    g.node_teams.push_back(1 + static_cast<TeamId>(v % 2));
    g.node_roles.push_back(static_cast<Role>(role(rng)));
    g.node_positions.push_back({unit(rng), unit(rng)});
  }
  g.node_features = Matrix(nodes, kNodeFeatureDim);
  for (double& x : g.node_features.data()) x = unit(rng);
  g.edge_features = Matrix(edges, kEdgeFeatureDim);
  for (std::size_t e = 0; e < edges; ++e) g.edges.push_back({pick(rng), pick(rng)});
  for (double& x : g.edge_features.data()) x = unit(rng);
  g.adjacency = normalized_adjacency(nodes, g.edges);
  g.label = 0.2 * unit(rng) - 0.1;
  g.event_id = make_event_id(g.match_id, 0);
  return g;
}

EventGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& o) {
  std::uniform_int_distribution<std::size_t> n(o.min_nodes, o.max_nodes);
  std::uniform_int_distribution<std::size_t> m(o.min_edges, o.max_edges);
  const std::size_t nodes = n(rng);
  return random_graph(rng, nodes, m(rng));
}

EventGraph permute_nodes(const EventGraph& g, const std::vector<std::size_t>& perm) {
  const std::size_t n = g.num_nodes();
  if (perm.size() != n) throw Error("permute_nodes: permutation size mismatch");
  EventGraph out = g;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t to = perm[v];
    out.node_teams[to] = g.node_teams[v];
    out.node_roles[to] = g.node_roles[v];
    out.node_positions[to] = g.node_positions[v];
    for (std::size_t c = 0; c < g.node_features.cols(); ++c) out.node_features(to, c) = g.node_features(v, c);
  }
  for (auto& e : out.edges) {
    e.src = perm[e.src];
    e.dst = perm[e.dst];
  }
  out.adjacency = normalized_adjacency(n, out.edges);
  return out;
}

std::vector<EventGraph> planted_signal_dataset(const PlantedSignalOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(kNodeFeatureDim);
  for (double& x : w) x = gauss(rng);
  const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
  for (double& x : w) x /= norm;

  std::vector<EventGraph> graphs;
  std::vector<double> signal;
  RandomGraphOptions shape{2, 10, 1, 10};
  for (std::size_t i = 0; i < o.graphs; ++i) {
    EventGraph g = random_graph(rng, shape);
    // Players in one window share a graph-level profile, so pooled features
    // vary between graphs rather than averaging out.
    std::vector<double> profile(kNodeFeatureDim);
    for (double& x : profile) x = unit(rng);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      for (std::size_t c = 0; c < kNodeFeatureDim; ++c) {
        g.node_features(v, c) = 0.9 * profile[c] + 0.1 * g.node_features(v, c);
      }
    }
    g.event_id = make_event_id(g.match_id, i);
    g.event_index = i;
    double s = 0.0;
    for (std::size_t c = 0; c < kNodeFeatureDim; ++c) {
      double mean = 0.0;
      for (std::size_t v = 0; v < g.num_nodes(); ++v) mean += g.node_features(v, c);
      s += w[c] * mean / static_cast<double>(g.num_nodes());
    }
    signal.push_back(o.signal_scale * s);
    graphs.push_back(std::move(g));
  }
  const double centre = std::accumulate(signal.begin(), signal.end(), 0.0) /
                        static_cast<double>(std::max<std::size_t>(1, signal.size()));
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    graphs[i].label = signal[i] - centre + o.noise_sigma * gauss(rng);
  }
  return graphs;
}

double label_variance(const std::vector<EventGraph>& graphs) {
  if (graphs.empty()) return 0.0;
  double mean = 0.0;
  for (const auto& g : graphs) mean += g.label;
  mean /= static_cast<double>(graphs.size());
  double var = 0.0;
  for (const auto& g : graphs) var += (g.label - mean) * (g.label - mean);
  return var / static_cast<double>(graphs.size());
}

}  // namespace goalnet
