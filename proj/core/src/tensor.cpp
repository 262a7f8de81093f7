#include "goalnet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "goalnet/error.hpp"

namespace goalnet {

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("Matrix: data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_str());
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("Matrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string Matrix::shape_str() const {
  return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
}

// ---------------------------------------------------------------- Node / Tensor

Matrix& detail::Node::grad_buffer() {
  if (grad.rows() != value.rows() || grad.cols() != value.cols()) {
    grad = Matrix(value.rows(), value.cols());
  }
  return grad;
}

Tensor::Tensor(Matrix value, bool requires_grad) : node_(std::make_shared<detail::Node>()) {
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

double Tensor::item() const {
  if (rows() != 1 || cols() != 1) {
    throw ShapeError(std::string("item(): expected 1x1, got ") + value().shape_str());
  }
  return value()(0, 0);
}

const Matrix& Tensor::grad() const { return node_->grad_buffer(); }

void Tensor::zero_grad() { node_->grad_buffer().fill(0.0); }

namespace {
thread_local bool g_grad_enabled = true;

void check_finite(const Matrix& m, const char* op) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) {
      throw NumericError(std::string("non-finite value produced by ") + op + " " +
                         m.shape_str());
    }
  }
}

[[noreturn]] void shape_fail(const char* op, const Matrix& a, const Matrix& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + a.shape_str() + " and " +
                   b.shape_str());
}
}  // namespace

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }
bool grad_enabled() noexcept { return g_grad_enabled; }

Tensor make_result(Matrix value, const char* op, std::vector<Tensor> inputs,
                   std::function<void(detail::Node&)> backward_fn) {
  check_finite(value, op);
  auto node = std::make_shared<detail::Node>();
  node->value = std::move(value);
  node->op = op;
  if (g_grad_enabled) {
    bool any = false;
    for (const auto& t : inputs) any = any || t.requires_grad();
    if (any) {
      node->requires_grad = true;
      node->parents.reserve(inputs.size());
      for (auto& t : inputs) node->parents.push_back(t.node());
      node->backward_fn = std::move(backward_fn);
    }
  }
  return Tensor(std::move(node));
}

void Tensor::backward() const {
  if (!node_ || !node_->backward_fn) {
    throw Error("backward(): tensor has no recorded forward ops");
  }
  if (rows() != 1 || cols() != 1) {
    throw ShapeError("backward(): loss must be 1x1, got " + value().shape_str());
  }

  // Iterative post-order DFS gives a topological order (inputs first).
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  std::vector<std::pair<detail::Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      detail::Node* p = n->parents[next++].get();
      if (p->requires_grad && !seen.contains(p)) {
        seen.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  // Interior grads restart from zero on every call; leaves keep accumulating.
  for (detail::Node* n : order) {
    if (n->backward_fn) n->grad_buffer().fill(0.0);
  }
  node_->grad_buffer()(0, 0) = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward_fn) (*it)->backward_fn(**it);
  }
}

// ---------------------------------------------------------------- helpers

namespace {

detail::Node& parent(detail::Node& n, std::size_t i) { return *n.parents[i]; }

struct Broadcast {
  std::size_t rows, cols;
  bool a_r, a_c, b_r, b_c;  // whether the operand broadcasts along rows/cols
};

Broadcast broadcast_shape(const char* op, const Matrix& a, const Matrix& b) {
  auto dim = [&](std::size_t x, std::size_t y) -> std::size_t {
    if (x == y) return x;
    if (x == 1) return y;
    if (y == 1) return x;
    shape_fail(op, a, b);
  };
  Broadcast s{dim(a.rows(), b.rows()), dim(a.cols(), b.cols()), false, false, false, false};
  s.a_r = a.rows() == 1 && s.rows != 1;
  s.a_c = a.cols() == 1 && s.cols != 1;
  s.b_r = b.rows() == 1 && s.rows != 1;
  s.b_c = b.cols() == 1 && s.cols != 1;
  return s;
}

inline double at_b(const Matrix& m, std::size_t r, std::size_t c) {
  return m(m.rows() == 1 ? 0 : r, m.cols() == 1 ? 0 : c);
}

// Adds g (full broadcast shape) into target, summing over broadcast axes.
void accumulate_reduced(detail::Node& target, const Matrix& g) {
  if (!target.requires_grad) return;
  Matrix& tg = target.grad_buffer();
  const bool rr = tg.rows() == 1 && g.rows() != 1;
  const bool cc = tg.cols() == 1 && g.cols() != 1;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) {
      tg(rr ? 0 : r, cc ? 0 : c) += g(r, c);
    }
  }
}

template <typename F>
Matrix elementwise(const Broadcast& s, const Matrix& a, const Matrix& b, F f) {
  Matrix out(s.rows, s.cols);
  if (a.rows() == s.rows && a.cols() == s.cols && b.rows() == s.rows && b.cols() == s.cols) {
    auto od = out.data();
    auto ad = a.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < od.size(); ++i) od[i] = f(ad[i], bd[i]);
    return out;
  }
  for (std::size_t r = 0; r < s.rows; ++r) {
    for (std::size_t c = 0; c < s.cols; ++c) out(r, c) = f(at_b(a, r, c), at_b(b, r, c));
  }
  return out;
}

void gemm_acc(const Matrix& a, bool ta, const Matrix& b, bool tb, Matrix& out) {
  // out += op(a) * op(b)
  const std::size_t m = ta ? a.cols() : a.rows();
  const std::size_t k = ta ? a.rows() : a.cols();
  const std::size_t n = tb ? b.rows() : b.cols();
  for (std::size_t i = 0; i < m; ++i) {
    double* orow = out.row(i).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ta ? a(p, i) : a(i, p);
      if (av == 0.0) continue;
      if (!tb) {
        const double* brow = b.row(p).data();
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
      } else {
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * b(j, p);
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- elementwise

Tensor add(const Tensor& a, const Tensor& b) {
  const auto s = broadcast_shape("add", a.value(), b.value());
  Matrix out = elementwise(s, a.value(), b.value(), [](double x, double y) { return x + y; });
  return make_result(std::move(out), "add", {a, b}, [](detail::Node& n) {
    accumulate_reduced(parent(n, 0), n.grad);
    accumulate_reduced(parent(n, 1), n.grad);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  const auto s = broadcast_shape("sub", a.value(), b.value());
  Matrix out = elementwise(s, a.value(), b.value(), [](double x, double y) { return x - y; });
  return make_result(std::move(out), "sub", {a, b}, [](detail::Node& n) {
    accumulate_reduced(parent(n, 0), n.grad);
    Matrix neg = n.grad;
    for (double& v : neg.data()) v = -v;
    accumulate_reduced(parent(n, 1), neg);
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  const auto s = broadcast_shape("mul", a.value(), b.value());
  Matrix out = elementwise(s, a.value(), b.value(), [](double x, double y) { return x * y; });
  return make_result(std::move(out), "mul", {a, b}, [s](detail::Node& n) {
    const Matrix& av = parent(n, 0).value;
    const Matrix& bv = parent(n, 1).value;
    if (parent(n, 0).requires_grad) {
      accumulate_reduced(parent(n, 0), elementwise(s, n.grad, bv, [](double g, double y) {
                           return g * y;
                         }));
    }
    if (parent(n, 1).requires_grad) {
      accumulate_reduced(parent(n, 1), elementwise(s, n.grad, av, [](double g, double x) {
                           return g * x;
                         }));
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  Matrix out = a.value();
  for (double& v : out.data()) v *= factor;
  return make_result(std::move(out), "scale", {a}, [factor](detail::Node& n) {
    Matrix& g = parent(n, 0).grad_buffer();
    auto gd = g.data();
    auto nd = n.grad.data();
    for (std::size_t i = 0; i < gd.size(); ++i) gd[i] += factor * nd[i];
  });
}

// ---------------------------------------------------------------- linear algebra

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) shape_fail("matmul", a.value(), b.value());
  Matrix out(a.rows(), b.cols());
  gemm_acc(a.value(), false, b.value(), false, out);
  return make_result(std::move(out), "matmul", {a, b}, [](detail::Node& n) {
    detail::Node& pa = parent(n, 0);
    detail::Node& pb = parent(n, 1);
    if (pa.requires_grad) gemm_acc(n.grad, false, pb.value, true, pa.grad_buffer());
    if (pb.requires_grad) gemm_acc(pa.value, true, n.grad, false, pb.grad_buffer());
  });
}

Tensor transpose(const Tensor& a) {
  const Matrix& v = a.value();
  Matrix out(v.cols(), v.rows());
  for (std::size_t r = 0; r < v.rows(); ++r)
    for (std::size_t c = 0; c < v.cols(); ++c) out(c, r) = v(r, c);
  return make_result(std::move(out), "transpose", {a}, [](detail::Node& n) {
    Matrix& g = parent(n, 0).grad_buffer();
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) += n.grad(c, r);
  });
}

Tensor reshape(const Tensor& a, std::size_t rows, std::size_t cols) {
  if (rows * cols != a.value().size()) {
    throw ShapeError("reshape: cannot view " + a.value().shape_str() + " as [" +
                     std::to_string(rows) + "x" + std::to_string(cols) + "]");
  }
  const auto src = a.value().data();
  Matrix out(rows, cols, std::vector<double>(src.begin(), src.end()));
  return make_result(std::move(out), "reshape", {a}, [](detail::Node& n) {
    auto g = parent(n, 0).grad_buffer().data();
    auto ng = n.grad.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += ng[i];
  });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) shape_fail("concat_cols", parts.front().value(), p.value());
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < p.cols(); ++c) out(r, off + c) = p.value()(r, c);
    off += p.cols();
  }
  return make_result(std::move(out), "concat_cols", parts, [](detail::Node& n) {
    std::size_t off = 0;
    for (auto& p : n.parents) {
      const std::size_t pc = p->value.cols();
      if (p->requires_grad) {
        Matrix& g = p->grad_buffer();
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < pc; ++c) g(r, c) += n.grad(r, off + c);
      }
      off += pc;
    }
  });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count) {
  if (begin + count > a.cols()) {
    throw ShapeError("slice_cols: [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") out of range for " +
                     a.value().shape_str());
  }
  Matrix out(a.rows(), count);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = a.value()(r, begin + c);
  return make_result(std::move(out), "slice_cols", {a}, [begin, count](detail::Node& n) {
    Matrix& g = parent(n, 0).grad_buffer();
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < count; ++c) g(r, begin + c) += n.grad(r, c);
  });
}

// ---------------------------------------------------------------- activations

Tensor relu(const Tensor& a) { return leaky_relu(a, 0.0); }

Tensor leaky_relu(const Tensor& a, double slope) {
  Matrix out = a.value();
  for (double& v : out.data()) v = v > 0.0 ? v : slope * v;
  const char* op = slope == 0.0 ? "relu" : "leaky_relu";
  return make_result(std::move(out), op, {a}, [slope](detail::Node& n) {
    detail::Node& p = parent(n, 0);
    auto g = p.grad_buffer().data();
    auto x = p.value.data();
    auto ng = n.grad.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += ng[i] * (x[i] > 0.0 ? 1.0 : slope);
  });
}

namespace {
Tensor softmax_impl(const Tensor& a, const Matrix* mask) {
  const Matrix& x = a.value();
  if (mask && (mask->rows() != x.rows() || mask->cols() != x.cols())) {
    shape_fail("softmax_rows(mask)", x, *mask);
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double mx = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (mask && (*mask)(r, c) == 0.0) continue;
      mx = std::max(mx, x(r, c));
      any = true;
    }
    if (!any) {
      throw ShapeError("softmax_rows: row " + std::to_string(r) + " is fully masked");
    }
    double z = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (mask && (*mask)(r, c) == 0.0) continue;
      out(r, c) = std::exp(x(r, c) - mx);
      z += out(r, c);
    }
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) /= z;
  }
  return make_result(std::move(out), "softmax_rows", {a}, [](detail::Node& n) {
    // dx = y * (dy - <dy, y>); masked entries have y = 0 and get nothing.
    Matrix& g = parent(n, 0).grad_buffer();
    const Matrix& y = n.value;
    for (std::size_t r = 0; r < y.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < y.cols(); ++c) dot += n.grad(r, c) * y(r, c);
      for (std::size_t c = 0; c < y.cols(); ++c) g(r, c) += y(r, c) * (n.grad(r, c) - dot);
    }
  });
}
}  // namespace

Tensor softmax_rows(const Tensor& a) { return softmax_impl(a, nullptr); }
Tensor softmax_rows(const Tensor& a, const Matrix& mask) { return softmax_impl(a, &mask); }

Tensor layer_norm_rows(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
  const Matrix& xv = x.value();
  const std::size_t n = xv.rows();
  const std::size_t d = xv.cols();
  if (gain.rows() != 1 || gain.cols() != d) shape_fail("layer_norm(gain)", xv, gain.value());
  if (bias.rows() != 1 || bias.cols() != d) shape_fail("layer_norm(bias)", xv, bias.value());

  Matrix xhat(n, d);
  std::vector<double> inv_std(n);
  Matrix out(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    double mean = 0.0;
    for (double v : xv.row(r)) mean += v;
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (double v : xv.row(r)) var += (v - mean) * (v - mean);
    var /= static_cast<double>(d);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < d; ++c) {
      xhat(r, c) = (xv(r, c) - mean) * inv_std[r];
      out(r, c) = xhat(r, c) * gain.value()(0, c) + bias.value()(0, c);
    }
  }
  return make_result(
      std::move(out), "layer_norm", {x, gain, bias},
      [xhat = std::move(xhat), inv_std = std::move(inv_std)](detail::Node& node) {
        detail::Node& px = parent(node, 0);
        detail::Node& pg = parent(node, 1);
        detail::Node& pb = parent(node, 2);
        const std::size_t n = xhat.rows();
        const std::size_t d = xhat.cols();
        const Matrix& dy = node.grad;
        if (pg.requires_grad || pb.requires_grad) {
          Matrix& gg = pg.grad_buffer();
          Matrix& gb = pb.grad_buffer();
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < d; ++c) {
              gg(0, c) += dy(r, c) * xhat(r, c);
              gb(0, c) += dy(r, c);
            }
        }
        if (!px.requires_grad) return;
        Matrix& gx = px.grad_buffer();
        const double dd = static_cast<double>(d);
        std::vector<double> dxhat(d);
        for (std::size_t r = 0; r < n; ++r) {
          double sum = 0.0;
          double sum_x = 0.0;
          for (std::size_t c = 0; c < d; ++c) {
            dxhat[c] = dy(r, c) * pg.value(0, c);
            sum += dxhat[c];
            sum_x += dxhat[c] * xhat(r, c);
          }
          for (std::size_t c = 0; c < d; ++c) {
            gx(r, c) += inv_std[r] / dd * (dd * dxhat[c] - sum - xhat(r, c) * sum_x);
          }
        }
      });
}

// ---------------------------------------------------------------- reductions

Tensor mean_rows(const Tensor& a) {
  const Matrix& v = a.value();
  if (v.rows() == 0) throw ShapeError("mean_rows: empty input");
  Matrix out(1, v.cols());
  for (std::size_t r = 0; r < v.rows(); ++r)
    for (std::size_t c = 0; c < v.cols(); ++c) out(0, c) += v(r, c);
  const double inv = 1.0 / static_cast<double>(v.rows());
  for (double& x : out.data()) x *= inv;
  return make_result(std::move(out), "mean_rows", {a}, [inv](detail::Node& n) {
    Matrix& g = parent(n, 0).grad_buffer();
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) += inv * n.grad(0, c);
  });
}

Tensor sum_all(const Tensor& a) {
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  return make_result(Matrix(1, 1, s), "sum_all", {a}, [](detail::Node& n) {
    const double g0 = n.grad(0, 0);
    for (double& g : parent(n, 0).grad_buffer().data()) g += g0;
  });
}

Tensor l2_norm_rows(const Tensor& a) {
  const Matrix& v = a.value();
  Matrix out(v.rows(), 1);
  for (std::size_t r = 0; r < v.rows(); ++r) {
    double s = 0.0;
    for (double x : v.row(r)) s += x * x;
    out(r, 0) = std::sqrt(s);
  }
  return make_result(std::move(out), "l2_norm_rows", {a}, [](detail::Node& n) {
    detail::Node& p = parent(n, 0);
    Matrix& g = p.grad_buffer();
    for (std::size_t r = 0; r < g.rows(); ++r) {
      const double norm = n.value(r, 0);
      if (norm == 0.0) continue;  // subgradient 0 at the origin
      for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) += n.grad(r, 0) * p.value(r, c) / norm;
    }
  });
}

namespace {
void check_same(const char* op, const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_fail(op, a.value(), b.value());
  if (a.value().size() == 0) throw ShapeError(std::string(op) + ": empty input");
}
}  // namespace

Tensor mse(const Tensor& pred, const Tensor& target) {
  check_same("mse", pred, target);
  const auto p = pred.value().data();
  const auto t = target.value().data();
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
  const double inv = 1.0 / static_cast<double>(p.size());
  return make_result(Matrix(1, 1, s * inv), "mse", {pred, target}, [inv](detail::Node& n) {
    detail::Node& pp = parent(n, 0);
    detail::Node& pt = parent(n, 1);
    const double g0 = n.grad(0, 0);
    const auto pv = pp.value.data();
    const auto tv = pt.value.data();
    if (pp.requires_grad) {
      auto g = pp.grad_buffer().data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += g0 * 2.0 * inv * (pv[i] - tv[i]);
    }
    if (pt.requires_grad) {
      auto g = pt.grad_buffer().data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= g0 * 2.0 * inv * (pv[i] - tv[i]);
    }
  });
}

Tensor mae(const Tensor& pred, const Tensor& target) {
  check_same("mae", pred, target);
  const auto p = pred.value().data();
  const auto t = target.value().data();
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - t[i]);
  const double inv = 1.0 / static_cast<double>(p.size());
  return make_result(Matrix(1, 1, s * inv), "mae", {pred, target}, [inv](detail::Node& n) {
    detail::Node& pp = parent(n, 0);
    detail::Node& pt = parent(n, 1);
    const double g0 = n.grad(0, 0);
    const auto pv = pp.value.data();
    const auto tv = pt.value.data();
    auto sign = [](double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); };
    if (pp.requires_grad) {
      auto g = pp.grad_buffer().data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += g0 * inv * sign(pv[i] - tv[i]);
    }
    if (pt.requires_grad) {
      auto g = pt.grad_buffer().data();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= g0 * inv * sign(pv[i] - tv[i]);
    }
  });
}

}  // namespace goalnet
