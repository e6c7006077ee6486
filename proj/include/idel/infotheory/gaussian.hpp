// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "idel/embedding.hpp"
#include "idel/numcore/rng.hpp"
#include "idel/numcore/tensor.hpp"

namespace idel::info {

/// Diagonal Gaussian. `mean` and `log_var` share a shape: [d] for a single
/// distribution or [B, d] for one distribution per row.
struct DiagGaussian {
  num::Tensor mean;
  num::Tensor log_var;

  std::size_t dim() const { return mean.cols(); }
  void validate() const;
  static DiagGaussian standard(std::size_t dim);
};

/// Per-dimension correlations of a jointly Gaussian (s, c) with unit
/// marginals: s_i = rho_i c_i + sqrt(1 - rho_i^2) eps_i.
struct GaussianPairSpec {
  std::vector<double> rho;

  std::size_t dim() const { return rho.size(); }
  /// Throws DomainError unless every |rho_i| < 1.
  void validate() const;
};

/// I(s; c) = -1/2 sum_i log(1 - rho_i^2).
double gaussian_mi(const GaussianPairSpec& spec);
/// Differential entropy of N(0, I_dim).
double standard_normal_entropy(std::size_t dim);

/// Log density per row ([B] for batched input, scalar for [d]).
num::Tensor gaussian_log_prob(const DiagGaussian& g, const num::Tensor& x);
/// KL(g || N(0, I)) per row.
num::Tensor gaussian_kl_to_standard(const DiagGaussian& g);
/// mean + exp(log_var / 2) * noise.
num::Tensor reparam_sample(const DiagGaussian& g, const num::Tensor& noise);

/// p(s | c) for the pair generator: N(rho * c, 1 - rho^2) per row of `c`.
DiagGaussian true_conditional(const GaussianPairSpec& spec, const num::Tensor& c);
/// n draws of (s, c) from the pair generator.
EmbeddingBatch sample_gaussian_pairs(const GaussianPairSpec& spec, std::size_t n, num::Rng& rng);

}  // namespace idel::info
