// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idel/infotheory/gaussian.hpp"
#include "idel/numcore/rng.hpp"
#include "idel/numcore/tensor.hpp"

namespace idel::mi {

/// kFrozen evaluates with detached parameters, so gradients reach the inputs
/// but never the conditional's own weights.
enum class ParamMode { kTrainable, kFrozen };

/// A diagonal-Gaussian model of p(s | c).
class GaussianConditional {
 public:
  virtual ~GaussianConditional() = default;
  /// One DiagGaussian row per row of `c` ([M, d_c] -> mean/log_var [M, d_s]).
  virtual info::DiagGaussian predict(const num::Tensor& c, ParamMode mode = ParamMode::kFrozen) const = 0;
  virtual std::size_t style_dim() const = 0;
  virtual std::size_t content_dim() const = 0;
};

/// Fixed p(s | c) = N(scale * c + shift, exp(log_var)), per dimension.
class AffineGaussianConditional final : public GaussianConditional {
 public:
  AffineGaussianConditional(std::vector<double> scale, std::vector<double> shift, std::vector<double> log_var);
  static AffineGaussianConditional from_pair_spec(const info::GaussianPairSpec& spec);

  info::DiagGaussian predict(const num::Tensor& c, ParamMode mode = ParamMode::kFrozen) const override;
  std::size_t style_dim() const override { return scale_.size(); }
  std::size_t content_dim() const override { return scale_.size(); }

 private:
  std::vector<double> scale_, shift_, log_var_;
};

/// Two hidden ReLU layers c -> h -> h, then linear heads for the mean and
/// the log-variance of s. The log-variance is clamped to
/// [kMinLogVar, kMaxLogVar].
class CondGaussianNet final : public GaussianConditional {
 public:
  static constexpr double kMinLogVar = -8.0;
  static constexpr double kMaxLogVar = 8.0;

  CondGaussianNet(std::size_t content_dim, std::size_t style_dim, std::size_t hidden, num::Rng& rng);

  /// Weights that reproduce N(scale * c, exp(log_var)) exactly, using the
  /// identity c = relu(c) - relu(-c). Hidden width is 2 * dim.
  static CondGaussianNet exact_affine(std::span<const double> scale, std::span<const double> log_var);

  /// Throws DivergenceError on a non-finite output.
  info::DiagGaussian predict(const num::Tensor& c, ParamMode mode = ParamMode::kFrozen) const override;
  std::size_t style_dim() const override { return style_dim_; }
  std::size_t content_dim() const override { return content_dim_; }
  std::size_t hidden() const { return hidden_; }

  /// Declaration order: w1, b1, w2, b2, w_mean, b_mean, w_logvar, b_logvar.
  std::vector<num::Tensor> params() const;

 private:
  CondGaussianNet() = default;

  std::size_t content_dim_ = 0, style_dim_ = 0, hidden_ = 0;
  num::Tensor w1_, b1_, w2_, b2_, w_mean_, b_mean_, w_logvar_, b_logvar_;
};

}  // namespace idel::mi
