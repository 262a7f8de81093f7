#pragma once

// Random event graphs and the planted-signal regression set, for tests and
// benchmarks.

#include <cstdint>
#include <random>
#include <vector>

#include "goalnet/graphs.hpp"

namespace goalnet {

struct RandomGraphOptions {
  std::size_t min_nodes = 1;
  std::size_t max_nodes = 8;
  std::size_t min_edges = 1;
  std::size_t max_edges = 10;
};

// A structurally valid graph: ascending player ids, features in [0, 1),
// random roles and positions, random directed edges (self-edges allowed),
// label in [-0.1, 0.1).
EventGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& options = {});
EventGraph random_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t edges);

// Same graph with node i moved to position perm[i]. The id list stays as is
// (ascending); features, roles, positions and edges follow their node.
EventGraph permute_nodes(const EventGraph& g, const std::vector<std::size_t>& perm);

struct PlantedSignalOptions {
  std::size_t graphs = 500;
  double noise_sigma = 0.01;
  double signal_scale = 2.0;
  std::uint64_t seed = 0;
};

// label = signal_scale * w . mean_v(x_v) + c + N(0, noise_sigma^2), with w a
// random unit vector and c chosen so the noiseless labels are centred. Node
// features are 0.9 * a per-graph profile + 0.1 * per-node noise, all in [0, 1).
std::vector<EventGraph> planted_signal_dataset(const PlantedSignalOptions& options = {});

double label_variance(const std::vector<EventGraph>& graphs);

}  // namespace goalnet
