// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "idel/embedding.hpp"
#include "idel/errors.hpp"
#include "idel/mibounds/conditional.hpp"
#include "idel/numcore/adam.hpp"
#include "idel/numcore/rng.hpp"

namespace idel::mi {

/// Barber-Agakov bound H(x) + mean log q(x | y). When `entropy_x` is empty
/// the entropy is treated as a dropped constant and only the mean is returned.
template <class X, class Y>
double ba_lower_bound(std::span<const std::pair<X, Y>> samples,
                      const std::function<double(const X&, const Y&)>& log_q,
                      std::optional<double> entropy_x = std::nullopt) {
  if (samples.empty()) throw ContractError("ba_lower_bound: empty sample set");
  double total = 0.0;
  for (const auto& [x, y] : samples) total += log_q(x, y);
  return entropy_x.value_or(0.0) + total / static_cast<double>(samples.size());
}

/// Barber-Agakov bound on I(s; c) with q = `cond`.
double ba_lower_bound(const EmbeddingBatch& batch, const GaussianConditional& cond,
                      std::optional<double> entropy_s = std::nullopt);

/// mean_j [ log p(s_j | c_j) - mean_k log p(s_j | c_k) ]. The M^2 cross terms
/// are reduced exactly through per-dimension moments. Differentiable with
/// respect to the batch; the conditional is frozen.
num::Tensor club_full(const EmbeddingBatch& batch, const GaussianConditional& cond);

/// mean_j [ log p(s_j | c_j) - log p(s_j | c_{k'_j}) ] for explicit negative
/// indices k'_j; O(M) evaluations.
num::Tensor club_stochastic(const EmbeddingBatch& batch, const GaussianConditional& cond,
                            std::span<const std::size_t> negatives);
/// Draws each k'_j uniformly from {0, ..., M-1}, k'_j = j allowed.
num::Tensor club_stochastic(const EmbeddingBatch& batch, const GaussianConditional& cond, num::Rng& rng);
num::Tensor club_stochastic(const EmbeddingBatch& batch, const GaussianConditional& cond, std::uint64_t seed);

/// Mean conditional log-likelihood L = mean_j log p(s_j | c_j), no gradients.
double conditional_log_likelihood(const EmbeddingBatch& batch, const GaussianConditional& cond);

/// Runs `steps` Adam ascent steps on L for `net` (the optimizer must own the
/// net's parameters) with the batch treated as constants. Returns L at the
/// final parameters. Throws DivergenceError on a non-finite L.
double fit_approximator(CondGaussianNet& net, num::Adam& optimizer, const EmbeddingBatch& batch, std::size_t steps);

}  // namespace idel::mi
