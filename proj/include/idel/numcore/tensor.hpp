// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace idel::num {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

namespace detail {

// One vertex of the reverse-mode tape. Leaves have no backward function.
struct Node {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until the node takes part in a backward pass
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
  }
};

}  // namespace detail

enum class GraphRetention { kFree, kRetain };

/// Dense row-major array of doubles with an optional gradient record.
///
/// Tensors are cheap handles: copies share the underlying node. Results of
/// operations on tensors that require gradients carry a backward rule and
/// their parents; `backward()` walks that tape once and, unless asked to
/// retain it, releases it.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor vector(std::vector<double> values, bool requires_grad = false);
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                       bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t size() const;
  // Leading dimension; 1 for scalars.
  std::size_t rows() const;
  // Trailing dimension; 1 for scalars.
  std::size_t cols() const;

  std::span<const double> data() const;
  // Writable view. Only meaningful for leaves (parameters, inputs).
  std::span<double> mutable_data();
  double item() const;
  double at(std::size_t i) const { return data()[i]; }
  double at(std::size_t r, std::size_t c) const { return data()[r * cols() + c]; }

  bool requires_grad() const;
  bool is_leaf() const;
  bool has_grad() const;
  std::span<const double> grad() const;
  std::span<double> mutable_grad();
  void zero_grad();

  /// Copy of the values with no gradient record.
  Tensor detach() const;

  /// Reverse sweep from a scalar. Leaf gradients accumulate additively.
  void backward(GraphRetention retention = GraphRetention::kFree) const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<detail::Node> node_;
};

/// Builds an op result. The backward rule is attached only when some input
/// requires gradients.
Tensor make_result(const char* op, Shape shape, std::vector<double> data,
                   std::vector<Tensor> inputs, std::function<void(detail::Node&)> backward);

}  // namespace idel::num
