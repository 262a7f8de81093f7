#include "goalnet/models.hpp"

#include <cmath>

#include "goalnet/error.hpp"

namespace goalnet {

std::string_view to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::kGcn: return "gcn";
    case ModelVariant::kGat: return "gat";
    case ModelVariant::kTransformer: return "transformer";
  }
  return "?";
}

ModelVariant model_variant_from_string(std::string_view s) {
  if (s == "gcn") return ModelVariant::kGcn;
  if (s == "gat") return ModelVariant::kGat;
  if (s == "transformer") return ModelVariant::kTransformer;
  throw ConfigError("unknown model variant '" + std::string(s) +
                    "' (expected gcn, gat or transformer)");
}

void ModelConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("model config: " + what);
  };
  need(node_feature_dim == kNodeFeatureDim ||
           node_feature_dim == kNodeFeatureDim + kCentralityFeatureDim,
       "node_feature_dim must be 10 or 13");
  need(hidden_dim >= 1, "hidden_dim must be >= 1");
  need(n_layers >= 1, "n_layers must be >= 1");
  need(n_heads >= 1, "n_heads must be >= 1");
  need(ffn_dim >= 1, "ffn_dim must be >= 1");
  need(edge_mlp.in == kEdgeFeatureDim, "edge_mlp input must equal the edge feature width (10)");
  need(edge_mlp.hidden >= 1 && edge_mlp.out >= 1, "edge_mlp dims must be >= 1");
  need(head_hidden_dim >= 1, "head_hidden_dim must be >= 1");
  need(role_embedding_dim >= 1, "role_embedding_dim must be >= 1");
  // checked for every variant since ablation trains all of them from one config
  need(hidden_dim % n_heads == 0, "n_heads must divide hidden_dim");
}

// ---------------------------------------------------------------- inputs

GraphInputs GraphInputs::from(const EventGraph& g) {
  const std::size_t n = g.num_nodes();
  const std::size_t m = g.num_edges();
  GraphInputs in;
  in.node_features = Tensor::constant(g.node_features);
  in.edge_features = Tensor::constant(g.edge_features);
  in.adjacency = Tensor::constant(g.adjacency);

  Matrix incidence(n, m);
  std::vector<double> degree(n, 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    const auto [s, d] = g.edges[e];
    incidence(s, e) = 1.0;
    incidence(d, e) = 1.0;
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (double x : incidence.row(v)) degree[v] += x;
    if (degree[v] > 0.0) {
      for (double& x : incidence.row(v)) x /= degree[v];
    }
  }
  in.incidence_mean = Tensor::constant(std::move(incidence));

  in.neighbour_mask = Matrix(n, n);
  for (std::size_t i = 0; i < g.adjacency.size(); ++i) {
    in.neighbour_mask.data()[i] = g.adjacency.data()[i] != 0.0 ? 1.0 : 0.0;
  }

  Matrix roles(n, kRoleCount);
  Matrix pos(n, 2);
  for (std::size_t v = 0; v < n; ++v) {
    roles(v, static_cast<std::size_t>(g.node_roles[v])) = 1.0;
    pos(v, 0) = g.node_positions[v].x;
    pos(v, 1) = g.node_positions[v].y;
  }
  in.role_onehot = Tensor::constant(std::move(roles));
  in.positions = Tensor::constant(std::move(pos));

  Matrix scatter(n * n, m);
  std::vector<double> pair_count(n * n, 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    const std::size_t pair = g.edges[e].src * n + g.edges[e].dst;
    scatter(pair, e) = 1.0;
    pair_count[pair] += 1.0;
  }
  in.no_edge_mask = Matrix(n, n, 1.0);
  for (std::size_t pair = 0; pair < n * n; ++pair) {
    if (pair_count[pair] == 0.0) continue;
    in.no_edge_mask.data()[pair] = 0.0;
    for (double& x : scatter.row(pair)) x /= pair_count[pair];
  }
  in.pair_scatter = Tensor::constant(std::move(scatter));
  return in;
}

// ---------------------------------------------------------------- model

namespace {
std::string layer_name(const char* prefix, std::size_t layer, const char* leaf) {
  return std::string(prefix) + ".l" + std::to_string(layer) + "." + leaf;
}
}  // namespace

GraphModel::GraphModel(ModelConfig config) : config_(config) {
  config_.validate();
  const auto& c = config_;
  const auto xavier = InitScheme::kXavierUniform;
  const auto kaiming = InitScheme::kKaimingNormal;
  const auto zeros = InitScheme::kZeros;

  params_.add("edge.W1", c.edge_mlp.in, c.edge_mlp.hidden, xavier);
  params_.add("edge.b1", 1, c.edge_mlp.hidden, zeros);
  params_.add("edge.W2", c.edge_mlp.hidden, c.edge_mlp.out, xavier);
  params_.add("edge.b2", 1, c.edge_mlp.out, zeros);

  const std::size_t gnn_in = c.node_feature_dim + c.edge_mlp.out;
  switch (c.variant) {
    case ModelVariant::kGcn:
      for (std::size_t l = 0; l < c.n_layers; ++l) {
        params_.add(layer_name("gcn", l, "W"), l == 0 ? gnn_in : c.hidden_dim, c.hidden_dim,
                    kaiming);
      }
      break;
    case ModelVariant::kGat: {
      const std::size_t head_dim = c.hidden_dim / c.n_heads;
      for (std::size_t l = 0; l < c.n_layers; ++l) {
        for (std::size_t h = 0; h < c.n_heads; ++h) {
          const std::string prefix = layer_name("gat", l, "h") + std::to_string(h);
          params_.add(prefix + ".W", l == 0 ? gnn_in : c.hidden_dim, head_dim, kaiming);
          params_.add(prefix + ".a_nb", head_dim, 1, kaiming);
          params_.add(prefix + ".a_self", head_dim, 1, kaiming);
        }
      }
      break;
    }
    case ModelVariant::kTransformer:
      params_.add("tf.in.W", c.node_feature_dim, c.hidden_dim, xavier);
      params_.add("tf.in.b", 1, c.hidden_dim, zeros);
      params_.add("tf.role.table", kRoleCount, c.role_embedding_dim, xavier);
      params_.add("tf.role.W", c.role_embedding_dim, c.hidden_dim, xavier);
      params_.add("tf.pos.W", 2, c.hidden_dim, xavier);
      for (std::size_t l = 0; l < c.n_layers; ++l) {
        params_.add(layer_name("tf", l, "Wq"), c.hidden_dim, c.hidden_dim, kaiming);
        params_.add(layer_name("tf", l, "Wk"), c.hidden_dim, c.hidden_dim, kaiming);
        params_.add(layer_name("tf", l, "Wv"), c.hidden_dim, c.hidden_dim, kaiming);
        params_.add(layer_name("tf", l, "rel.W"), c.edge_mlp.out, c.n_heads, kaiming);
        params_.add(layer_name("tf", l, "rel.b"), 1, c.n_heads, zeros);
        params_.add(layer_name("tf", l, "rel.no_edge"), 1, c.n_heads, zeros);
        params_.add(layer_name("tf", l, "ln1.gain"), 1, c.hidden_dim, InitScheme::kOnes);
        params_.add(layer_name("tf", l, "ln1.bias"), 1, c.hidden_dim, zeros);
        params_.add(layer_name("tf", l, "ffn.W1"), c.hidden_dim, c.ffn_dim, xavier);
        params_.add(layer_name("tf", l, "ffn.b1"), 1, c.ffn_dim, zeros);
        params_.add(layer_name("tf", l, "ffn.W2"), c.ffn_dim, c.hidden_dim, xavier);
        params_.add(layer_name("tf", l, "ffn.b2"), 1, c.hidden_dim, zeros);
        params_.add(layer_name("tf", l, "ln2.gain"), 1, c.hidden_dim, InitScheme::kOnes);
        params_.add(layer_name("tf", l, "ln2.bias"), 1, c.hidden_dim, zeros);
      }
      break;
  }

  params_.add("head.W3", c.hidden_dim, c.head_hidden_dim, xavier);
  params_.add("head.b3", 1, c.head_hidden_dim, zeros);
  params_.add("head.W4", c.head_hidden_dim, 1, xavier);
  params_.add("head.b4", 1, 1, zeros);

  init_params(params_, c.seed);
}

GraphModel::GraphModel(const GraphModel& other)
    : config_(other.config_), params_(other.params_.clone()) {}

GraphModel& GraphModel::operator=(const GraphModel& other) {
  if (this != &other) {
    config_ = other.config_;
    params_ = other.params_.clone();
  }
  return *this;
}

Tensor GraphModel::edge_mlp(const Tensor& e) const {
  Tensor h = relu(matmul(e, p("edge.W1")) + p("edge.b1"));
  return relu(matmul(h, p("edge.W2")) + p("edge.b2"));
}

Tensor GraphModel::node_input_with_edges(const GraphInputs& in) const {
  const Tensor edges = edge_mlp(in.edge_features);
  return concat_cols({in.node_features, matmul(in.incidence_mean, edges)});
}

Tensor GraphModel::gcn_layers(const GraphInputs& in) const {
  Tensor h = node_input_with_edges(in);
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    h = relu(matmul(matmul(in.adjacency, h), p(layer_name("gcn", l, "W"))));
  }
  return h;
}

Tensor GraphModel::gat_layers(const GraphInputs& in, AttentionTrace* trace) const {
  Tensor h = node_input_with_edges(in);
  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    std::vector<Tensor> heads;
    if (trace) trace->attention.emplace_back();
    for (std::size_t m = 0; m < config_.n_heads; ++m) {
      const std::string prefix = layer_name("gat", l, "h") + std::to_string(m);
      const Tensor wh = matmul(h, p(prefix + ".W"));                // |V| x d
      const Tensor nb = transpose(matmul(wh, p(prefix + ".a_nb")));  // 1 x |V|, term for u
      const Tensor self = matmul(wh, p(prefix + ".a_self"));         // |V| x 1, term for v
      // scores(v, u) = LeakyReLU(a^T [W h_u || W h_v]) over u in N(v)
      const Tensor scores = leaky_relu(self + nb, 0.2);
      const Tensor alpha = softmax_rows(scores, in.neighbour_mask);
      if (trace) trace->attention.back().push_back(alpha.value());
      heads.push_back(matmul(alpha, wh));
    }
    h = relu(concat_cols(heads));
  }
  return h;
}

Tensor GraphModel::transformer_layers(const GraphInputs& in, AttentionTrace* trace) const {
  const auto& c = config_;
  const std::size_t n = in.node_features.rows();
  const std::size_t head_dim = c.hidden_dim / c.n_heads;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(head_dim));

  // Node features plus positional encodings (role embedding, pitch position).
  Tensor h = matmul(in.node_features, p("tf.in.W")) + p("tf.in.b");
  h = h + matmul(matmul(in.role_onehot, p("tf.role.table")), p("tf.role.W"));
  h = h + matmul(in.positions, p("tf.pos.W"));

  const Tensor edges = edge_mlp(in.edge_features);
  const Tensor no_edge = Tensor::constant(in.no_edge_mask);

  for (std::size_t l = 0; l < c.n_layers; ++l) {
    const Tensor q = matmul(h, p(layer_name("tf", l, "Wq")));
    const Tensor k = matmul(h, p(layer_name("tf", l, "Wk")));
    const Tensor v = matmul(h, p(layer_name("tf", l, "Wv")));
    // Per-pair, per-head relational bias: linear map of the mean transformed
    // edge u -> v, or the learned no-edge scalar.
    const Tensor rel_edges =
        matmul(edges, p(layer_name("tf", l, "rel.W"))) + p(layer_name("tf", l, "rel.b"));
    const Tensor rel_pairs = matmul(in.pair_scatter, rel_edges);  // |V|^2 x heads
    const Tensor& no_edge_bias = p(layer_name("tf", l, "rel.no_edge"));

    if (trace) trace->attention.emplace_back();
    std::vector<Tensor> heads;
    for (std::size_t m = 0; m < c.n_heads; ++m) {
      const Tensor qh = slice_cols(q, m * head_dim, head_dim);
      const Tensor kh = slice_cols(k, m * head_dim, head_dim);
      const Tensor vh = slice_cols(v, m * head_dim, head_dim);
      const Tensor r = reshape(slice_cols(rel_pairs, m, 1), n, n) +
                       slice_cols(no_edge_bias, m, 1) * no_edge;
      const Tensor alpha = softmax_rows(scale(matmul(qh, transpose(kh)) + r, inv_sqrt_d));
      if (trace) trace->attention.back().push_back(alpha.value());
      heads.push_back(matmul(alpha, vh));
    }
    h = layer_norm_rows(h + concat_cols(heads), p(layer_name("tf", l, "ln1.gain")),
                        p(layer_name("tf", l, "ln1.bias")));
    const Tensor ffn =
        matmul(relu(matmul(h, p(layer_name("tf", l, "ffn.W1"))) + p(layer_name("tf", l, "ffn.b1"))),
               p(layer_name("tf", l, "ffn.W2"))) +
        p(layer_name("tf", l, "ffn.b2"));
    h = layer_norm_rows(h + ffn, p(layer_name("tf", l, "ln2.gain")),
                        p(layer_name("tf", l, "ln2.bias")));
  }
  return h;
}

Tensor GraphModel::head(const Tensor& pooled) const {
  return matmul(relu(matmul(pooled, p("head.W3")) + p("head.b3")), p("head.W4")) + p("head.b4");
}

ForwardResult GraphModel::forward(const GraphInputs& in, AttentionTrace* trace) const {
  if (in.node_features.cols() != config_.node_feature_dim) {
    throw ShapeError("model expects " + std::to_string(config_.node_feature_dim) +
                     " node features, graph has " + std::to_string(in.node_features.cols()));
  }
  Tensor h;
  switch (config_.variant) {
    case ModelVariant::kGcn: h = gcn_layers(in); break;
    case ModelVariant::kGat: h = gat_layers(in, trace); break;
    case ModelVariant::kTransformer: h = transformer_layers(in, trace); break;
  }
  Tensor z = mean_rows(h);
  return {head(z), h, z};
}

ForwardResult GraphModel::forward(const EventGraph& graph, AttentionTrace* trace) const {
  return forward(GraphInputs::from(graph), trace);
}

ModelOutput GraphModel::predict(const EventGraph& graph) const {
  NoGradGuard guard;
  return forward(graph).output();
}

Tensor graph_loss(const GraphModel& model, const EventGraph& graph) {
  const ForwardResult r = model.forward(graph);
  return mse(r.prediction, Tensor::constant(Matrix(1, 1, graph.label)));
}

}  // namespace goalnet
