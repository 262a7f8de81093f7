#pragma once

// GoalNet (GCN), GATGoalNet (neighbour attention) and TransGoalNet (global
// attention): EventGraph -> scalar delta-xT prediction plus final node
// embeddings for attribution.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "goalnet/graphs.hpp"
#include "goalnet/params.hpp"
#include "goalnet/tensor.hpp"

namespace goalnet {

enum class ModelVariant { kGcn, kGat, kTransformer };
std::string_view to_string(ModelVariant v);
ModelVariant model_variant_from_string(std::string_view s);  // gcn | gat | transformer

struct EdgeMlpDims {
  std::size_t in = kEdgeFeatureDim;
  std::size_t hidden = 32;
  std::size_t out = 16;
  friend bool operator==(const EdgeMlpDims&, const EdgeMlpDims&) = default;
};

struct ModelConfig {
  ModelVariant variant = ModelVariant::kGcn;
  std::size_t node_feature_dim = kNodeFeatureDim;  // 13 with centrality features
  std::size_t hidden_dim = 64;
  std::size_t n_layers = 2;
  std::size_t n_heads = 4;  // gat, transformer
  std::size_t ffn_dim = 128;  // transformer
  EdgeMlpDims edge_mlp;
  std::size_t head_hidden_dim = 32;
  std::size_t role_embedding_dim = 8;  // transformer
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct ModelOutput {
  double prediction = 0.0;
  Matrix node_embeddings;  // |V| x hidden, final layer, before pooling
  Matrix pooled;           // 1 x hidden
};

// Attention weights recorded during a forward pass: attention[layer][head] is
// |V| x |V|; row v holds the weights v assigns to every node u.
struct AttentionTrace {
  std::vector<std::vector<Matrix>> attention;
};

struct ForwardResult {
  Tensor prediction;  // 1 x 1
  Tensor embeddings;  // |V| x hidden
  Tensor pooled;      // 1 x hidden

  ModelOutput output() const { return {prediction.item(), embeddings.value(), pooled.value()}; }
};

// Constant per-graph inputs shared by all variants.
struct GraphInputs {
  Tensor node_features;   // |V| x 10
  Tensor edge_features;   // |E| x 10
  Tensor adjacency;       // |V| x |V|, row-normalized
  Tensor incidence_mean;  // |V| x |E|, averages incident edges per node
  Matrix neighbour_mask;  // |V| x |V|, 1 where adjacency is nonzero
  Tensor role_onehot;     // |V| x 5
  Tensor positions;       // |V| x 2
  Tensor pair_scatter;    // |V|^2 x |E|, averages edges u -> v into pair (u, v)
  Matrix no_edge_mask;    // |V| x |V|, 1 where no edge u -> v exists

  static GraphInputs from(const EventGraph& g);
};

class GraphModel {
 public:
  // Builds the parameter set for the configured variant and initializes it
  // from config.seed.
  explicit GraphModel(ModelConfig config);

  // Copies own their parameter values; they never share tensors.
  GraphModel(const GraphModel& other);
  GraphModel& operator=(const GraphModel& other);
  GraphModel(GraphModel&&) noexcept = default;
  GraphModel& operator=(GraphModel&&) noexcept = default;

  ForwardResult forward(const EventGraph& graph, AttentionTrace* trace = nullptr) const;
  ForwardResult forward(const GraphInputs& inputs, AttentionTrace* trace = nullptr) const;

  // Forward pass with recording disabled.
  ModelOutput predict(const EventGraph& graph) const;

  // e' = ReLU(W2 ReLU(W1 e + b1) + b2), row-wise over an |E| x d_e matrix.
  Tensor edge_mlp(const Tensor& edge_features) const;

  const ModelConfig& config() const { return config_; }
  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }

 private:
  Tensor node_input_with_edges(const GraphInputs& in) const;
  Tensor gcn_layers(const GraphInputs& in) const;
  Tensor gat_layers(const GraphInputs& in, AttentionTrace* trace) const;
  Tensor transformer_layers(const GraphInputs& in, AttentionTrace* trace) const;
  Tensor head(const Tensor& pooled) const;
  const Tensor& p(const std::string& name) const { return params_.get(name); }

  ModelConfig config_;
  ParamSet params_;
};

// Squared error of one graph's prediction; the training objective.
Tensor graph_loss(const GraphModel& model, const EventGraph& graph);

}  // namespace goalnet
