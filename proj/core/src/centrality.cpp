#include "goalnet/centrality.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <ostream>

#include "goalnet/error.hpp"
#include "goalnet/format.hpp"

namespace goalnet {

SimpleGraph SimpleGraph::from_edges(std::size_t n,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  SimpleGraph g;
  g.n = n;
  g.neighbours.assign(n, {});
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw Error("SimpleGraph: edge endpoint out of range");
    if (a == b) continue;
    g.neighbours[a].push_back(b);
    g.neighbours[b].push_back(a);
  }
  for (auto& nb : g.neighbours) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return g;
}

std::vector<Centrality> centralities(const SimpleGraph& g) {
  const std::size_t n = g.n;
  std::vector<Centrality> out(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::vector<std::vector<std::size_t>> pred(n);
  std::vector<std::size_t> stack;

  for (std::size_t s = 0; s < n; ++s) {
    out[s].degree = static_cast<double>(g.neighbours[s].size());
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : pred) p.clear();
    stack.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      stack.push_back(v);
      for (std::size_t w : g.neighbours[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        }
      }
    }
    long reach_sum = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] > 0) reach_sum += dist[v];
    }
    // stack holds the source's component
    if (stack.size() > 1) {
      out[s].closeness = static_cast<double>(stack.size() - 1) / static_cast<double>(reach_sum);
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) out[w].betweenness += delta[w];
    }
  }
  // each unordered pair was counted from both endpoints
  for (auto& c : out) c.betweenness /= 2.0;
  return out;
}

PassingNetwork passing_network(const std::vector<SpadlAction>& match,
                               const std::vector<std::optional<PlayerId>>& recipients) {
  if (recipients.size() != match.size()) throw Error("passing_network: recipients size mismatch");
  PassingNetwork net;
  std::map<PlayerId, TeamId> team_of;
  for (const auto& a : match) {
    team_of.emplace(a.player_id, a.team_id);
    net.match_id = a.game_id;
  }
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (recipients[i]) team_of.emplace(*recipients[i], match[i].team_id);
  }
  std::map<PlayerId, std::size_t> index;
  for (const auto& [p, t] : team_of) {
    index[p] = net.players.size();
    net.players.push_back(p);
    net.teams.push_back(t);
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts;
  for (std::size_t i = 0; i < match.size(); ++i) {
    if (!recipients[i] || !is_pass_like(match[i].action_type)) continue;
    std::size_t a = index.at(match[i].player_id);
    std::size_t b = index.at(*recipients[i]);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    ++counts[{a, b}];
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [pair, c] : counts) {
    edges.push_back(pair);
    net.weights.push_back({pair, c});
  }
  net.graph = SimpleGraph::from_edges(net.players.size(), edges);
  return net;
}

std::vector<CentralityRow> centrality_report(const PassingNetwork& net) {
  const auto values = centralities(net.graph);
  std::vector<CentralityRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    rows.push_back({net.match_id, net.players[i], net.teams[i], values[i]});
  }
  return rows;
}

void write_centrality_csv(std::ostream& out, const std::vector<CentralityRow>& rows) {
  out << "match_id,player_id,team_id,degree,betweenness,closeness\n";
  for (const auto& r : rows) {
    out << r.match_id << ',' << r.player << ',' << r.team << ',' << fmt_real(r.value.degree) << ','
        << fmt_real(r.value.betweenness) << ',' << fmt_real(r.value.closeness) << '\n';
  }
}

void append_centrality_features(std::vector<EventGraph>& graphs,
                                const std::vector<PassingNetwork>& networks) {
  std::map<std::pair<MatchId, PlayerId>, std::array<double, kCentralityFeatureDim>> table;
  for (const auto& net : networks) {
    const auto values = centralities(net.graph);
    const double n = static_cast<double>(net.players.size());
    const double pairs = (n - 1.0) * (n - 2.0) / 2.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      table[{net.match_id, net.players[i]}] = {
          n > 1.0 ? values[i].degree / (n - 1.0) : 0.0,
          pairs > 0.0 ? values[i].betweenness / pairs : 0.0, values[i].closeness};
    }
  }
  for (auto& g : graphs) {
    if (g.node_features.cols() != kNodeFeatureDim) {
      throw ShapeError("append_centrality_features: graph " + std::to_string(g.event_id) +
                       " already has " + std::to_string(g.node_features.cols()) + " node features");
    }
    Matrix out(g.num_nodes(), kNodeFeatureDim + kCentralityFeatureDim);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
      for (std::size_t c = 0; c < kNodeFeatureDim; ++c) out(v, c) = g.node_features(v, c);
      if (auto it = table.find({g.match_id, g.node_ids[v]}); it != table.end()) {
        for (std::size_t c = 0; c < kCentralityFeatureDim; ++c) out(v, kNodeFeatureDim + c) = it->second[c];
      }
    }
    g.node_features = std::move(out);
  }
}

}  // namespace goalnet
