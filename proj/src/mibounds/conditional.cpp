// SPDX-License-Identifier: Apache-2.0
#include "idel/mibounds/conditional.hpp"

#include <cmath>

#include "idel/errors.hpp"
#include "idel/numcore/ops.hpp"

namespace idel::mi {

using num::Tensor;

namespace {

Tensor random_matrix(std::size_t rows, std::size_t cols, double stddev, num::Rng& rng) {
  std::vector<double> w(rows * cols);
  for (auto& v : w) v = stddev * rng.normal();
  return Tensor::matrix(rows, cols, std::move(w), true);
}

const Tensor& maybe_frozen(const Tensor& p, ParamMode mode, Tensor& storage) {
  if (mode == ParamMode::kTrainable) return p;
  storage = p.detach();
  return storage;
}

void check_content(const Tensor& c, std::size_t width, const char* who) {
  if (c.rank() != 2 || c.cols() != width) {
    throw DimensionError(std::string(who) + ": expected content of width " + std::to_string(width) + ", got " +
                         num::shape_string(c.shape()));
  }
}

}  // namespace

AffineGaussianConditional::AffineGaussianConditional(std::vector<double> scale, std::vector<double> shift,
                                                     std::vector<double> log_var)
    : scale_(std::move(scale)), shift_(std::move(shift)), log_var_(std::move(log_var)) {
  if (scale_.empty() || shift_.size() != scale_.size() || log_var_.size() != scale_.size()) {
    throw DimensionError("affine conditional: parameter vectors must share a positive length");
  }
}

AffineGaussianConditional AffineGaussianConditional::from_pair_spec(const info::GaussianPairSpec& spec) {
  spec.validate();
  std::vector<double> lv;
  for (double r : spec.rho) lv.push_back(std::log1p(-r * r));
  return {spec.rho, std::vector<double>(spec.dim(), 0.0), std::move(lv)};
}

info::DiagGaussian AffineGaussianConditional::predict(const Tensor& c, ParamMode) const {
  check_content(c, scale_.size(), "affine conditional");
  const Tensor mean = c * Tensor::vector(scale_) + Tensor::vector(shift_);
  const Tensor log_var = Tensor::zeros(c.shape()) + Tensor::vector(log_var_);
  return {mean, log_var};
}

CondGaussianNet::CondGaussianNet(std::size_t content_dim, std::size_t style_dim, std::size_t hidden, num::Rng& rng)
    : content_dim_(content_dim), style_dim_(style_dim), hidden_(hidden) {
  if (content_dim == 0 || style_dim == 0 || hidden == 0) throw ContractError("cond net: dimensions must be positive");
  const double he_in = std::sqrt(2.0 / static_cast<double>(content_dim));
  const double he_hidden = std::sqrt(2.0 / static_cast<double>(hidden));
  const double head = std::sqrt(1.0 / static_cast<double>(hidden));
  w1_ = random_matrix(content_dim, hidden, he_in, rng);
  b1_ = Tensor::zeros({hidden}, true);
  w2_ = random_matrix(hidden, hidden, he_hidden, rng);
  b2_ = Tensor::zeros({hidden}, true);
  w_mean_ = random_matrix(hidden, style_dim, head, rng);
  b_mean_ = Tensor::zeros({style_dim}, true);
  w_logvar_ = random_matrix(hidden, style_dim, head, rng);
  b_logvar_ = Tensor::zeros({style_dim}, true);
}

CondGaussianNet CondGaussianNet::exact_affine(std::span<const double> scale, std::span<const double> log_var) {
  const std::size_t d = scale.size();
  if (d == 0 || log_var.size() != d) throw DimensionError("cond net: scale and log_var must share a positive length");
  CondGaussianNet net;
  net.content_dim_ = d;
  net.style_dim_ = d;
  net.hidden_ = 2 * d;
  const std::size_t h = 2 * d;
  std::vector<double> w1(d * h, 0.0), w2(h * h, 0.0), wm(h * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    w1[i * h + i] = 1.0;
    w1[i * h + d + i] = -1.0;
    wm[i * d + i] = scale[i];
    wm[(d + i) * d + i] = -scale[i];
  }
  for (std::size_t i = 0; i < h; ++i) w2[i * h + i] = 1.0;
  net.w1_ = Tensor::matrix(d, h, std::move(w1), true);
  net.b1_ = Tensor::zeros({h}, true);
  net.w2_ = Tensor::matrix(h, h, std::move(w2), true);
  net.b2_ = Tensor::zeros({h}, true);
  net.w_mean_ = Tensor::matrix(h, d, std::move(wm), true);
  net.b_mean_ = Tensor::zeros({d}, true);
  net.w_logvar_ = Tensor::zeros({h, d}, true);
  net.b_logvar_ = Tensor::vector(std::vector<double>(log_var.begin(), log_var.end()), true);
  return net;
}

info::DiagGaussian CondGaussianNet::predict(const Tensor& c, ParamMode mode) const {
  check_content(c, content_dim_, "cond net");
  Tensor s[8];
  const Tensor& w1 = maybe_frozen(w1_, mode, s[0]);
  const Tensor& b1 = maybe_frozen(b1_, mode, s[1]);
  const Tensor& w2 = maybe_frozen(w2_, mode, s[2]);
  const Tensor& b2 = maybe_frozen(b2_, mode, s[3]);
  const Tensor& wm = maybe_frozen(w_mean_, mode, s[4]);
  const Tensor& bm = maybe_frozen(b_mean_, mode, s[5]);
  const Tensor& wl = maybe_frozen(w_logvar_, mode, s[6]);
  const Tensor& bl = maybe_frozen(b_logvar_, mode, s[7]);
  const Tensor h1 = num::relu(num::matmul(c, w1) + b1);
  const Tensor h2 = num::relu(num::matmul(h1, w2) + b2);
  const Tensor mean = num::matmul(h2, wm) + bm;
  const Tensor log_var = num::clamp(num::matmul(h2, wl) + bl, kMinLogVar, kMaxLogVar);
  for (const Tensor* t : {&mean, &log_var}) {
    for (double v : t->data()) {
      if (!std::isfinite(v)) throw DivergenceError("cond net: non-finite output", 0);
    }
  }
  return {mean, log_var};
}

std::vector<Tensor> CondGaussianNet::params() const {
  return {w1_, b1_, w2_, b2_, w_mean_, b_mean_, w_logvar_, b_logvar_};
}

}  // namespace idel::mi
