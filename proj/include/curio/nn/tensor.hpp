#pragma once

// Dense row-major tensors with tape-free reverse-mode differentiation.
// Every op output keeps shared references to its inputs and a backward
// closure; Tensor::backward() walks that graph in reverse topological order.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace curio::nn {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until needed
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  std::vector<double>& ensure_grad();
};

}  // namespace detail

class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t size() const { return node_->data.size(); }
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<double> data() { return node_->data; }
  std::span<const double> data() const { return node_->data; }
  double operator[](std::size_t i) const { return node_->data[i]; }
  double at(std::size_t r, std::size_t c) const { return node_->data[r * cols() + c]; }
  double item() const;

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return !node_->grad.empty(); }
  std::span<double> grad() { return node_->ensure_grad(); }
  std::span<const double> grad() const { return node_->ensure_grad(); }
  void zero_grad();

  /// Same data, cut from the graph, no gradient.
  Tensor detach() const;
  /// Deep copy of the data into a fresh leaf.
  Tensor clone(bool requires_grad = false) const;

  /// Backpropagates from a single-element tensor. Gradients accumulate into
  /// every reachable tensor with requires_grad set.
  void backward();

  const char* op() const { return node_->op; }
  detail::Node& node() const { return *node_; }

  // internal: wrap an op result
  static Tensor make(Shape shape, std::vector<double> data, const char* op,
                     std::vector<Tensor> inputs, std::function<void(detail::Node&)> backward);

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;
};

}  // namespace curio::nn
