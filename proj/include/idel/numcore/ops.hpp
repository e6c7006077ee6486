// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idel/numcore/tensor.hpp"

namespace idel::num {

// Elementwise binary ops. `b` may match `a` exactly, be a rank-0 scalar, or
// match `a` without its leading dimension (broadcast over rows).
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);

Tensor neg(const Tensor& a);
Tensor scale(const Tensor& a, double k);
Tensor add_scalar(const Tensor& a, double k);

/// [m,k] x [k,n] -> [m,n]
Tensor matmul(const Tensor& a, const Tensor& b);

Tensor relu(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
Tensor square(const Tensor& a);
// Gradient is zero where the input lies outside [lo, hi].
Tensor clamp(const Tensor& a, double lo, double hi);

/// Log of the normalized exponential along the last dimension.
Tensor log_softmax(const Tensor& a);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
/// [B,n] -> [B]
Tensor row_sum(const Tensor& a);

/// Joins along the last dimension; leading dimensions must agree.
Tensor concat(const Tensor& a, const Tensor& b);
/// Columns [begin, end) of the last dimension.
Tensor slice(const Tensor& a, std::size_t begin, std::size_t end);

/// Gathers rows of a rank-2 tensor (or elements of a rank-1 tensor).
/// Gradients scatter-add, so repeated indices accumulate.
Tensor index_rows(const Tensor& a, std::span<const std::size_t> rows);
/// Mean over consecutive row groups: rows [offsets[g], offsets[g+1]) -> row g.
Tensor segment_mean(const Tensor& a, std::span<const std::size_t> offsets);
/// Flat-index gather into a rank-1 result.
Tensor take(const Tensor& a, std::span<const std::size_t> flat_indices);

/// out[j,k] = log N(x_j; mean_k, diag(exp(log_var_k))) for x [M,d], mean and
/// log_var [K,d]. Fused so the O(M*K) table does not materialize per-dimension
/// intermediates.
Tensor pairwise_gaussian_log_prob(const Tensor& x, const Tensor& mean, const Tensor& log_var);

/// Scalar mean of pairwise_gaussian_log_prob over all M*K pairs, computed
/// from centered per-dimension moments of `x` in O((M+K) d) without the table.
Tensor mean_pairwise_gaussian_log_prob(const Tensor& x, const Tensor& mean, const Tensor& log_var);

inline Tensor operator+(const Tensor& a, const Tensor& b) { return add(a, b); }
inline Tensor operator-(const Tensor& a, const Tensor& b) { return sub(a, b); }
inline Tensor operator*(const Tensor& a, const Tensor& b) { return mul(a, b); }
inline Tensor operator*(const Tensor& a, double k) { return scale(a, k); }
inline Tensor operator*(double k, const Tensor& a) { return scale(a, k); }
inline Tensor operator-(const Tensor& a) { return neg(a); }

}  // namespace idel::num
