// SPDX-License-Identifier: Apache-2.0
#include "idel/infotheory/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "idel/errors.hpp"
#include "idel/numcore/ops.hpp"

namespace idel::info {

using num::Tensor;

void DiagGaussian::validate() const {
  if (!mean.defined() || !log_var.defined() || mean.shape() != log_var.shape()) {
    throw DimensionError("diag gaussian: mean and log_var shapes differ");
  }
  if (mean.rank() < 1 || mean.rank() > 2) throw DimensionError("diag gaussian: expected [d] or [B,d]");
  for (double v : log_var.data()) {
    if (!std::isfinite(v)) throw ContractError("diag gaussian: non-finite log-variance");
  }
}

DiagGaussian DiagGaussian::standard(std::size_t dim) {
  return {Tensor::zeros({dim}), Tensor::zeros({dim})};
}

void GaussianPairSpec::validate() const {
  if (rho.empty()) throw ContractError("gaussian pair spec: empty rho");
  for (double r : rho) {
    if (!(std::abs(r) < 1.0)) throw DomainError("gaussian pair spec: |rho| must be < 1, got " + std::to_string(r));
  }
}

double gaussian_mi(const GaussianPairSpec& spec) {
  spec.validate();
  double mi = 0.0;
  for (double r : spec.rho) mi -= 0.5 * std::log1p(-r * r);
  return mi;
}

double standard_normal_entropy(std::size_t dim) {
  return 0.5 * static_cast<double>(dim) * std::log(2.0 * std::numbers::pi * std::numbers::e);
}

Tensor gaussian_log_prob(const DiagGaussian& g, const Tensor& x) {
  g.validate();
  if (x.shape() != g.mean.shape()) {
    throw DimensionError("gaussian_log_prob: point " + num::shape_string(x.shape()) + " vs distribution " +
                         num::shape_string(g.mean.shape()));
  }
  const Tensor diff = x - g.mean;
  const Tensor quad = num::square(diff) * num::exp(-g.log_var);
  const Tensor terms = num::add_scalar(g.log_var + quad, std::log(2.0 * std::numbers::pi));
  const Tensor total = terms.rank() == 2 ? num::row_sum(terms) : num::sum(terms);
  return num::scale(total, -0.5);
}

Tensor gaussian_kl_to_standard(const DiagGaussian& g) {
  g.validate();
  const Tensor terms = num::add_scalar(num::square(g.mean) + num::exp(g.log_var) - g.log_var, -1.0);
  const Tensor total = terms.rank() == 2 ? num::row_sum(terms) : num::sum(terms);
  return num::scale(total, 0.5);
}

Tensor reparam_sample(const DiagGaussian& g, const Tensor& noise) {
  g.validate();
  if (noise.shape() != g.mean.shape()) {
    throw DimensionError("reparam_sample: noise " + num::shape_string(noise.shape()) + " vs distribution " +
                         num::shape_string(g.mean.shape()));
  }
  return g.mean + num::exp(num::scale(g.log_var, 0.5)) * noise;
}

DiagGaussian true_conditional(const GaussianPairSpec& spec, const Tensor& c) {
  spec.validate();
  const std::size_t d = spec.dim();
  if (c.rank() != 2 || c.cols() != d) throw DimensionError("true_conditional: content width does not match rho");
  std::vector<double> lv(d);
  for (std::size_t i = 0; i < d; ++i) lv[i] = std::log1p(-spec.rho[i] * spec.rho[i]);
  const Tensor rho = Tensor::vector(spec.rho);
  const Tensor mean = c * rho;
  const Tensor log_var = num::add(Tensor::zeros(c.shape()), Tensor::vector(std::move(lv)));
  return {mean, log_var};
}

EmbeddingBatch sample_gaussian_pairs(const GaussianPairSpec& spec, std::size_t n, num::Rng& rng) {
  spec.validate();
  if (n == 0) throw ContractError("sample_gaussian_pairs: n must be positive");
  const std::size_t d = spec.dim();
  std::vector<double> c(n * d), s(n * d);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      const double ci = rng.normal();
      const double eps = rng.normal();
      const double r = spec.rho[i];
      c[j * d + i] = ci;
      s[j * d + i] = r * ci + std::sqrt(1.0 - r * r) * eps;
    }
  }
  return {Tensor::matrix(n, d, std::move(s)), Tensor::matrix(n, d, std::move(c))};
}

}  // namespace idel::info
