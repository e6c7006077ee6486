// SPDX-License-Identifier: Apache-2.0
#include "idel/numcore/tensor.hpp"

#include <numeric>
#include <sstream>
#include <unordered_set>

#include "idel/errors.hpp"

namespace idel::num {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad) {
  for (auto d : shape) {
    if (d == 0) throw DimensionError("tensor: zero-sized dimension in " + shape_string(shape));
  }
  if (shape_size(shape) != data.size()) {
    throw DimensionError("tensor: shape " + shape_string(shape) + " does not hold " +
                         std::to_string(data.size()) + " values");
  }
  node_ = std::make_shared<detail::Node>();
  node_->shape = std::move(shape);
  node_->data = std::move(data);
  node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  const auto n = shape_size(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) { return Tensor({}, {value}, requires_grad); }

Tensor Tensor::vector(std::vector<double> values, bool requires_grad) {
  const auto n = values.size();
  return Tensor({n}, std::move(values), requires_grad);
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad) {
  return Tensor({rows, cols}, std::move(values), requires_grad);
}

namespace {
const detail::Node& checked(const std::shared_ptr<detail::Node>& node) {
  if (!node) throw ContractError("tensor: use of undefined tensor");
  return *node;
}
}  // namespace

const Shape& Tensor::shape() const { return checked(node_).shape; }
std::size_t Tensor::size() const { return checked(node_).data.size(); }

std::size_t Tensor::rows() const {
  const auto& s = shape();
  return s.empty() ? 1 : s.front();
}

std::size_t Tensor::cols() const {
  const auto& s = shape();
  return s.empty() ? 1 : s.back();
}

std::span<const double> Tensor::data() const { return checked(node_).data; }

std::span<double> Tensor::mutable_data() {
  checked(node_);
  return node_->data;
}

double Tensor::item() const {
  if (size() != 1) throw ContractError("item: tensor of shape " + shape_string(shape()) + " is not scalar");
  return node_->data[0];
}

bool Tensor::requires_grad() const { return checked(node_).requires_grad; }
bool Tensor::is_leaf() const { return !checked(node_).backward; }
bool Tensor::has_grad() const { return checked(node_).grad.size() == node_->data.size(); }

std::span<const double> Tensor::grad() const {
  if (!has_grad()) throw ContractError("grad: tensor has no gradient record");
  return node_->grad;
}

std::span<double> Tensor::mutable_grad() {
  checked(node_);
  node_->ensure_grad();
  return node_->grad;
}

void Tensor::zero_grad() {
  checked(node_);
  node_->grad.assign(node_->data.size(), 0.0);
}

Tensor Tensor::detach() const {
  const auto& n = checked(node_);
  return Tensor(n.shape, n.data, false);
}

void Tensor::backward(GraphRetention retention) const {
  const auto& root = checked(node_);
  if (root.data.size() != 1) {
    throw ContractError("backward: loss of shape " + shape_string(root.shape) + " is not scalar");
  }
  if (!root.requires_grad) return;

  // Iterative post-order DFS gives a topological order (parents before children).
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  std::vector<std::pair<detail::Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      auto* parent = node->parents[next++].get();
      if (parent->requires_grad && seen.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (auto* node : order) {
    if (node->backward) {
      node->grad.assign(node->data.size(), 0.0);
    } else {
      node->ensure_grad();
    }
  }
  node_->grad[0] += 1.0;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward) (*it)->backward(**it);
  }

  if (retention == GraphRetention::kFree) {
    for (auto* node : order) {
      if (node->backward) {
        node->backward = nullptr;
        node->parents.clear();
        node->grad.clear();
        node->grad.shrink_to_fit();
        node->requires_grad = false;
      }
    }
  }
}

Tensor make_result(const char* op, Shape shape, std::vector<double> data, std::vector<Tensor> inputs,
                   std::function<void(detail::Node&)> backward) {
  Tensor out(std::move(shape), std::move(data), false);
  bool needs_grad = false;
  for (const auto& in : inputs) needs_grad = needs_grad || in.requires_grad();
  auto& node = *out.node();
  node.op = op;
  if (needs_grad) {
    node.requires_grad = true;
    node.parents.reserve(inputs.size());
    for (auto& in : inputs) node.parents.push_back(in.node());
    node.backward = std::move(backward);
  }
  return out;
}

}  // namespace idel::num
