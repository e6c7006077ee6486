// SPDX-License-Identifier: Apache-2.0
#include "idel/mibounds/estimators.hpp"

#include <cmath>
#include <vector>

#include "idel/infotheory/gaussian.hpp"
#include "idel/numcore/ops.hpp"

namespace idel::mi {

using num::Tensor;

namespace {

void check_batch(const EmbeddingBatch& batch, const GaussianConditional& cond, const char* who) {
  batch.validate();
  if (batch.s.cols() != cond.style_dim() || batch.c.cols() != cond.content_dim()) {
    throw DimensionError(std::string(who) + ": batch widths (" + std::to_string(batch.s.cols()) + ", " +
                         std::to_string(batch.c.cols()) + ") do not match the conditional (" +
                         std::to_string(cond.style_dim()) + ", " + std::to_string(cond.content_dim()) + ")");
  }
}

}  // namespace

double ba_lower_bound(const EmbeddingBatch& batch, const GaussianConditional& cond, std::optional<double> entropy_s) {
  check_batch(batch, cond, "ba_lower_bound");
  return entropy_s.value_or(0.0) + conditional_log_likelihood(batch, cond);
}

double conditional_log_likelihood(const EmbeddingBatch& batch, const GaussianConditional& cond) {
  check_batch(batch, cond, "conditional_log_likelihood");
  const auto detached = batch.detached();
  return num::mean(info::gaussian_log_prob(cond.predict(detached.c), detached.s)).item();
}

Tensor club_full(const EmbeddingBatch& batch, const GaussianConditional& cond) {
  check_batch(batch, cond, "club_full");
  const auto g = cond.predict(batch.c, ParamMode::kFrozen);
  const Tensor positive = num::mean(info::gaussian_log_prob(g, batch.s));
  // mean over all (j, k) of log p(s_j | c_k)
  const Tensor all_pairs = num::mean_pairwise_gaussian_log_prob(batch.s, g.mean, g.log_var);
  return positive - all_pairs;
}

Tensor club_stochastic(const EmbeddingBatch& batch, const GaussianConditional& cond,
                       std::span<const std::size_t> negatives) {
  check_batch(batch, cond, "club_stochastic");
  if (negatives.size() != batch.size()) throw DimensionError("club_stochastic: one negative index per pair required");
  const auto g = cond.predict(batch.c, ParamMode::kFrozen);
  const Tensor positive = info::gaussian_log_prob(g, batch.s);
  const info::DiagGaussian shuffled{num::index_rows(g.mean, negatives), num::index_rows(g.log_var, negatives)};
  const Tensor negative = info::gaussian_log_prob(shuffled, batch.s);
  return num::mean(positive - negative);
}

Tensor club_stochastic(const EmbeddingBatch& batch, const GaussianConditional& cond, num::Rng& rng) {
  batch.validate();
  std::vector<std::size_t> negatives(batch.size());
  for (auto& k : negatives) k = rng.index(batch.size());
  return club_stochastic(batch, cond, negatives);
}

Tensor club_stochastic(const EmbeddingBatch& batch, const GaussianConditional& cond, std::uint64_t seed) {
  num::Rng rng(seed);
  return club_stochastic(batch, cond, rng);
}

double fit_approximator(CondGaussianNet& net, num::Adam& optimizer, const EmbeddingBatch& batch, std::size_t steps) {
  check_batch(batch, net, "fit_approximator");
  if (batch.size() < 2) throw ContractError("fit_approximator: batch size must be at least 2");
  const auto data = batch.detached();
  for (std::size_t step = 0; step < steps; ++step) {
    optimizer.zero_grad();
    const Tensor ll = num::mean(info::gaussian_log_prob(net.predict(data.c, ParamMode::kTrainable), data.s));
    if (!std::isfinite(ll.item())) throw DivergenceError("fit_approximator: non-finite log-likelihood", step);
    num::neg(ll).backward();
    optimizer.step();
  }
  const double final_ll = conditional_log_likelihood(data, net);
  if (!std::isfinite(final_ll)) throw DivergenceError("fit_approximator: non-finite log-likelihood", steps);
  return final_ll;
}

}  // namespace idel::mi
