#pragma once

// Plain-loop re-implementations of the three models, written against the
// EventGraph directly (edge lists, not the precomputed operator matrices).

#include <cmath>
#include <string>
#include <vector>

#include "goalnet/models.hpp"

namespace oracle {

using goalnet::EventGraph;
using goalnet::GraphModel;
using goalnet::Matrix;

inline Matrix mm(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline Matrix add_row(Matrix a, const Matrix& row) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += row(0, j);
  return a;
}

inline Matrix relu(Matrix a) {
  for (double& x : a.data()) x = x > 0 ? x : 0;
  return a;
}

inline const Matrix& P(const GraphModel& m, const std::string& name) {
  return m.params().get(name).value();
}

inline Matrix edge_mlp(const GraphModel& m, const Matrix& e) {
  return relu(add_row(mm(relu(add_row(mm(e, P(m, "edge.W1")), P(m, "edge.b1"))), P(m, "edge.W2")),
                      P(m, "edge.b2")));
}

// [x_v || mean of transformed edges touching v]
inline Matrix node_input(const GraphModel& m, const EventGraph& g) {
  const Matrix ep = edge_mlp(m, g.edge_features);
  const std::size_t n = g.num_nodes(), dx = g.node_features.cols(), de = ep.cols();
  Matrix h(n, dx + de);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t c = 0; c < dx; ++c) h(v, c) = g.node_features(v, c);
    std::size_t count = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      if (g.edges[e].src != v && g.edges[e].dst != v) continue;
      ++count;
      for (std::size_t c = 0; c < de; ++c) h(v, dx + c) += ep(e, c);
    }
    if (count)
      for (std::size_t c = 0; c < de; ++c) h(v, dx + c) /= static_cast<double>(count);
  }
  return h;
}

// Row-normalized (A + I) rebuilt from the edge list.
inline Matrix adjacency(const EventGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<bool>> link(n, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < n; ++v) link[v][v] = true;
  for (const auto& e : g.edges) link[e.src][e.dst] = true;
  Matrix a(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    double deg = 0;
    for (std::size_t u = 0; u < n; ++u) deg += link[v][u];
    for (std::size_t u = 0; u < n; ++u) a(v, u) = link[v][u] / deg;
  }
  return a;
}

inline Matrix mean_pool(const Matrix& h) {
  Matrix z(1, h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) z(0, j) += h(i, j) / static_cast<double>(h.rows());
  return z;
}

inline double head(const GraphModel& m, const Matrix& z) {
  const Matrix h = relu(add_row(mm(z, P(m, "head.W3")), P(m, "head.b3")));
  return add_row(mm(h, P(m, "head.W4")), P(m, "head.b4"))(0, 0);
}

inline Matrix gcn(const GraphModel& m, const EventGraph& g) {
  const Matrix a = adjacency(g);
  Matrix h = node_input(m, g);
  for (std::size_t l = 0; l < m.config().n_layers; ++l)
    h = relu(mm(mm(a, h), P(m, "gcn.l" + std::to_string(l) + ".W")));
  return h;
}

inline double leaky(double x) { return x > 0 ? x : 0.2 * x; }

// attention[l][head](v, u), filled when non-null.
inline Matrix gat(const GraphModel& m, const EventGraph& g,
                  std::vector<std::vector<Matrix>>* attention = nullptr) {
  const std::size_t n = g.num_nodes();
  const Matrix a = adjacency(g);
  const auto& c = m.config();
  const std::size_t d = c.hidden_dim / c.n_heads;
  Matrix h = node_input(m, g);
  for (std::size_t l = 0; l < c.n_layers; ++l) {
    Matrix next(n, c.hidden_dim);
    if (attention) attention->emplace_back();
    for (std::size_t k = 0; k < c.n_heads; ++k) {
      const std::string pre = "gat.l" + std::to_string(l) + ".h" + std::to_string(k);
      const Matrix wh = mm(h, P(m, pre + ".W"));
      const Matrix& a_nb = P(m, pre + ".a_nb");
      const Matrix& a_self = P(m, pre + ".a_self");
      Matrix alpha(n, n);
      for (std::size_t v = 0; v < n; ++v) {
        std::vector<double> score(n, 0.0);
        double mx = -1e300;
        for (std::size_t u = 0; u < n; ++u) {
          if (a(v, u) == 0.0) continue;
          double s = 0;
          for (std::size_t j = 0; j < d; ++j) s += a_self(j, 0) * wh(v, j) + a_nb(j, 0) * wh(u, j);
          score[u] = leaky(s);
          mx = std::max(mx, score[u]);
        }
        double total = 0;
        for (std::size_t u = 0; u < n; ++u)
          if (a(v, u) != 0.0) total += alpha(v, u) = std::exp(score[u] - mx);
        for (std::size_t u = 0; u < n; ++u) alpha(v, u) /= total;
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t j = 0; j < d; ++j) next(v, k * d + j) += alpha(v, u) * wh(u, j);
      }
      if (attention) attention->back().push_back(alpha);
    }
    h = relu(next);
  }
  return h;
}

inline Matrix layer_norm(const Matrix& x, const Matrix& gain, const Matrix& bias) {
  Matrix y(x.rows(), x.cols());
  const double d = static_cast<double>(x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double mean = 0, var = 0;
    for (std::size_t j = 0; j < x.cols(); ++j) mean += x(i, j) / d;
    for (std::size_t j = 0; j < x.cols(); ++j) var += (x(i, j) - mean) * (x(i, j) - mean) / d;
    for (std::size_t j = 0; j < x.cols(); ++j)
      y(i, j) = (x(i, j) - mean) / std::sqrt(var + 1e-5) * gain(0, j) + bias(0, j);
  }
  return y;
}

inline Matrix transformer(const GraphModel& m, const EventGraph& g,
                          std::vector<std::vector<Matrix>>* attention = nullptr) {
  const auto& c = m.config();
  const std::size_t n = g.num_nodes();
  const std::size_t d = c.hidden_dim / c.n_heads;
  Matrix h = add_row(mm(g.node_features, P(m, "tf.in.W")), P(m, "tf.in.b"));
  const Matrix role_w = mm(P(m, "tf.role.table"), P(m, "tf.role.W"));
  const Matrix& pos_w = P(m, "tf.pos.W");
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t j = 0; j < c.hidden_dim; ++j)
      h(v, j) += role_w(static_cast<std::size_t>(g.node_roles[v]), j) +
                 g.node_positions[v].x * pos_w(0, j) + g.node_positions[v].y * pos_w(1, j);
  const Matrix ep = edge_mlp(m, g.edge_features);

  for (std::size_t l = 0; l < c.n_layers; ++l) {
    const std::string pre = "tf.l" + std::to_string(l) + ".";
    const Matrix q = mm(h, P(m, pre + "Wq")), k = mm(h, P(m, pre + "Wk")), vv = mm(h, P(m, pre + "Wv"));
    const Matrix rel = add_row(mm(ep, P(m, pre + "rel.W")), P(m, pre + "rel.b"));
    const Matrix& no_edge = P(m, pre + "rel.no_edge");
    Matrix mixed(n, c.hidden_dim);
    if (attention) attention->emplace_back();
    for (std::size_t hd = 0; hd < c.n_heads; ++hd) {
      Matrix alpha(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> s(n);
        double mx = -1e300;
        for (std::size_t j = 0; j < n; ++j) {
          double dot = 0;
          for (std::size_t t = 0; t < d; ++t) dot += q(i, hd * d + t) * k(j, hd * d + t);
          double bias = 0;
          std::size_t count = 0;
          for (std::size_t e = 0; e < g.num_edges(); ++e)
            if (g.edges[e].src == i && g.edges[e].dst == j) {
              bias += rel(e, hd);
              ++count;
            }
          bias = count ? bias / static_cast<double>(count) : no_edge(0, hd);
          s[j] = (dot + bias) / std::sqrt(static_cast<double>(d));
          mx = std::max(mx, s[j]);
        }
        double total = 0;
        for (std::size_t j = 0; j < n; ++j) total += alpha(i, j) = std::exp(s[j] - mx);
        for (std::size_t j = 0; j < n; ++j) alpha(i, j) /= total;
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t t = 0; t < d; ++t) mixed(i, hd * d + t) += alpha(i, j) * vv(j, hd * d + t);
      }
      if (attention) attention->back().push_back(alpha);
    }
    Matrix r1 = h;
    for (std::size_t i = 0; i < r1.size(); ++i) r1.data()[i] += mixed.data()[i];
    h = layer_norm(r1, P(m, pre + "ln1.gain"), P(m, pre + "ln1.bias"));
    const Matrix f = add_row(
        mm(relu(add_row(mm(h, P(m, pre + "ffn.W1")), P(m, pre + "ffn.b1"))), P(m, pre + "ffn.W2")),
        P(m, pre + "ffn.b2"));
    Matrix r2 = h;
    for (std::size_t i = 0; i < r2.size(); ++i) r2.data()[i] += f.data()[i];
    h = layer_norm(r2, P(m, pre + "ln2.gain"), P(m, pre + "ln2.bias"));
  }
  return h;
}

inline Matrix embeddings(const GraphModel& m, const EventGraph& g) {
  switch (m.config().variant) {
    case goalnet::ModelVariant::kGcn: return gcn(m, g);
    case goalnet::ModelVariant::kGat: return gat(m, g);
    case goalnet::ModelVariant::kTransformer: return transformer(m, g);
  }
  return {};
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace oracle
