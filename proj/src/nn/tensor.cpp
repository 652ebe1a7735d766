#include "curio/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "curio/error.hpp"

namespace curio::nn {

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

std::vector<double>& detail::Node::ensure_grad() {
  if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
  return grad;
}

namespace {

void check_shape(const Shape& shape) {
  if (shape.empty()) throw InvalidInput("tensor shape must have at least one dimension");
  for (std::size_t d : shape)
    if (d == 0) throw InvalidInput("tensor dimensions must be positive, got " + shape_str(shape));
}

void check_finite(std::span<const double> values, const char* op, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite ") + what + " produced by op '" + op + "'");
  }
}

}  // namespace

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  check_shape(shape);
  const std::size_t n = shape_size(shape);
  return from(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::from(Shape shape, std::vector<double> values, bool requires_grad) {
  check_shape(shape);
  if (values.size() != shape_size(shape))
    throw InvalidInput("Tensor::from: " + std::to_string(values.size()) + " values for shape " + shape_str(shape));
  check_finite(values, "leaf", "value");
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->data = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value) { return from({1}, {value}); }

std::size_t Tensor::rows() const {
  const auto& s = shape();
  return s.size() == 1 ? 1 : s[0];
}

std::size_t Tensor::cols() const {
  const auto& s = shape();
  return s.size() == 1 ? s[0] : s[1];
}

double Tensor::item() const {
  if (size() != 1) throw InvalidInput("item() on tensor of shape " + shape_str(shape()));
  return node_->data[0];
}

void Tensor::zero_grad() {
  if (!node_->grad.empty()) std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

Tensor Tensor::detach() const {
  auto node = std::make_shared<detail::Node>();
  node->shape = node_->shape;
  node->data = node_->data;
  return Tensor(std::move(node));
}

Tensor Tensor::clone(bool requires_grad) const {
  Tensor t = detach();
  t.node_->requires_grad = requires_grad;
  return t;
}

Tensor Tensor::make(Shape shape, std::vector<double> data, const char* op, std::vector<Tensor> inputs,
                    std::function<void(detail::Node&)> backward) {
  check_finite(data, op, "value");
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->data = std::move(data);
  node->op = op;
  bool needs = false;
  for (const auto& in : inputs) needs = needs || in.node_->requires_grad;
  if (needs) {
    node->requires_grad = true;
    node->parents.reserve(inputs.size());
    for (auto& in : inputs) node->parents.push_back(std::move(in.node_));
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

void Tensor::backward() {
  if (size() != 1) throw UsageError("backward() requires a single-element tensor, got " + shape_str(shape()));
  if (!node_->requires_grad) return;

  // iterative post-order DFS for the topological order
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  std::vector<std::pair<detail::Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      detail::Node* p = n->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  node_->ensure_grad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    if (!n->backward) continue;
    n->ensure_grad();
    n->backward(*n);
    for (const auto& p : n->parents) {
      if (p->requires_grad) check_finite(p->grad, n->op, "gradient");
    }
  }
}

}  // namespace curio::nn
