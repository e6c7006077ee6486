// SPDX-License-Identifier: Apache-2.0
#include "idel/numcore/adam.hpp"

#include <cmath>
#include <string>

#include "idel/errors.hpp"

namespace idel::num {

namespace {
void validate(const AdamConfig& c) {
  if (!(c.lr > 0.0)) throw ContractError("adam: learning rate must be positive");
  if (!(c.beta1 >= 0.0 && c.beta1 < 1.0) || !(c.beta2 >= 0.0 && c.beta2 < 1.0)) {
    throw ContractError("adam: betas must lie in [0, 1)");
  }
  if (!(c.eps > 0.0)) throw ContractError("adam: eps must be positive");
}
}  // namespace

Adam::Adam(std::vector<Tensor> params, AdamConfig config) : params_(std::move(params)) {
  validate(config);
  state_.config = config;
  for (const auto& p : params_) {
    if (!p.defined() || !p.requires_grad()) throw ContractError("adam: parameters must require gradients");
    state_.m.emplace_back(p.size(), 0.0);
    state_.v.emplace_back(p.size(), 0.0);
  }
}

void Adam::set_lr(double lr) {
  AdamConfig c = state_.config;
  c.lr = lr;
  validate(c);
  state_.config = c;
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

void Adam::step() {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!params_[i].has_grad()) {
      throw ContractError("adam: parameter " + std::to_string(i) + " has no gradient");
    }
  }
  const auto& c = state_.config;
  ++state_.step;
  const double t = static_cast<double>(state_.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto w = params_[i].mutable_data();
    auto g = params_[i].mutable_grad();
    auto& m = state_.m[i];
    auto& v = state_.v[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = c.beta1 * m[j] + (1.0 - c.beta1) * g[j];
      v[j] = c.beta2 * v[j] + (1.0 - c.beta2) * g[j] * g[j];
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      w[j] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
      g[j] = 0.0;
    }
  }
}

}  // namespace idel::num
