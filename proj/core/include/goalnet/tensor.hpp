#pragma once

// Dense rank-2 tensors with reverse-mode gradient recording.
//
// A Tensor is a cheap handle onto a shared node. Ops on tensors that require
// gradients record their inputs and a backward closure; Tensor::backward()
// walks the recorded graph in reverse topological order. Leaf tensors
// (parameters) accumulate gradients across backward calls until zero_grad().
//
// Every op checks its output for NaN/Inf and throws NumericError naming the op.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace goalnet {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void fill(double v);
  std::string shape_str() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

namespace detail {
struct Node {
  Matrix value;
  Matrix grad;  // allocated lazily
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;
  bool requires_grad = false;
  const char* op = "leaf";

  Matrix& grad_buffer();
};
}  // namespace detail

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Matrix value, bool requires_grad = false);

  static Tensor constant(Matrix value) { return Tensor(std::move(value), false); }
  static Tensor parameter(Matrix value) { return Tensor(std::move(value), true); }

  bool defined() const noexcept { return node_ != nullptr; }
  std::size_t rows() const { return node_->value.rows(); }
  std::size_t cols() const { return node_->value.cols(); }
  bool requires_grad() const { return node_->requires_grad; }
  const char* op() const { return node_->op; }

  const Matrix& value() const { return node_->value; }
  // Direct write access for optimizers and initializers. Only meaningful on
  // leaves; mutating an interior node invalidates its recorded backward.
  Matrix& mutable_value() { return node_->value; }
  double item() const;

  // Gradient buffer; a zero matrix of the value's shape if never touched.
  const Matrix& grad() const;
  void zero_grad();

  // Seeds d(self)/d(self) = 1 and accumulates into every reachable leaf.
  // Requires a 1x1 tensor produced by at least one recorded op.
  void backward() const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  friend Tensor make_result(Matrix, const char*, std::vector<Tensor>,
                            std::function<void(detail::Node&)>);
  std::shared_ptr<detail::Node> node_;
};

// While alive on a thread, ops record nothing (evaluation mode).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};
bool grad_enabled() noexcept;

// Elementwise binary ops broadcast any dimension of extent 1.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);
Tensor reshape(const Tensor& a, std::size_t rows, std::size_t cols);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t count);

Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope = 0.2);

// Row-wise softmax. With a mask, entries where mask == 0 are excluded (output
// 0, no gradient); every row must keep at least one entry.
Tensor softmax_rows(const Tensor& a);
Tensor softmax_rows(const Tensor& a, const Matrix& mask);

// Per-row normalization; gain and bias are 1 x cols.
Tensor layer_norm_rows(const Tensor& x, const Tensor& gain, const Tensor& bias,
                       double eps = 1e-5);

Tensor mean_rows(const Tensor& a);  // n x c -> 1 x c
Tensor sum_all(const Tensor& a);    // -> 1 x 1
Tensor l2_norm_rows(const Tensor& a);  // n x c -> n x 1

Tensor mse(const Tensor& pred, const Tensor& target);  // -> 1 x 1
Tensor mae(const Tensor& pred, const Tensor& target);  // -> 1 x 1

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }

}  // namespace goalnet
