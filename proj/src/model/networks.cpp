// SPDX-License-Identifier: Apache-2.0
#include "idel/model/networks.hpp"

#include <cmath>
#include <cstring>

#include "idel/errors.hpp"
#include "idel/numcore/ops.hpp"

namespace idel::model {

using num::Tensor;

Linear::Linear(std::size_t in, std::size_t out, num::Rng& rng) {
  std::vector<double> w(in * out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  for (auto& v : w) v = rng.normal() * scale;
  this->w = Tensor::matrix(in, out, std::move(w), true);
  b = Tensor::zeros({out}, true);
}

Tensor Linear::operator()(const Tensor& x) const { return num::matmul(x, w) + b; }

Encoder::Encoder(const EncoderDims& dims, num::Rng& rng) : dims_(dims) {
  if (dims.style == 0 || dims.content == 0 || dims.embed == 0 || dims.hidden == 0 || dims.vocab == 0) {
    throw ContractError("encoder: all dimensions must be positive");
  }
  if (dims.style >= dims.content) throw ContractError("encoder: style dimension must be below content dimension");
  std::vector<double> e(dims.vocab * dims.embed);
  for (auto& v : e) v = rng.normal();
  embedding_ = Tensor::matrix(dims.vocab, dims.embed, std::move(e), true);
  trunk_ = Linear(dims.embed, dims.hidden, rng);
  mu_s_ = Linear(dims.hidden, dims.style, rng);
  lv_s_ = Linear(dims.hidden, dims.style, rng);
  mu_c_ = Linear(dims.hidden, dims.content, rng);
  lv_c_ = Linear(dims.hidden, dims.content, rng);
}

Encoder::Posterior Encoder::forward(const Tensor& freqs) const {
  if (freqs.rank() != 2 || freqs.cols() != dims_.vocab) {
    throw DimensionError("encoder: expected [B, " + std::to_string(dims_.vocab) + "] frequencies, got " +
                         num::shape_string(freqs.shape()));
  }
  const Tensor h = num::tanh(trunk_(num::matmul(freqs, embedding_)));
  const Tensor heads[] = {mu_s_(h), lv_s_(h), mu_c_(h), lv_c_(h)};
  for (const auto& t : heads) {
    for (double v : t.data()) {
      if (!std::isfinite(v)) throw DivergenceError("encoder: non-finite posterior parameter", 0);
    }
  }
  return {{heads[0], heads[1]}, {heads[2], heads[3]}};
}

std::vector<Tensor> Encoder::params() const {
  return {embedding_, trunk_.w, trunk_.b, mu_s_.w, mu_s_.b, lv_s_.w, lv_s_.b, mu_c_.w, mu_c_.b, lv_c_.w, lv_c_.b};
}

Tensor Classifier::log_probs(const Tensor& s) const { return num::log_softmax(map(s)); }
Tensor ContentDecoder::log_probs(const Tensor& c) const { return num::log_softmax(map(c)); }
Tensor Generator::log_probs(const Tensor& s, const Tensor& c) const { return num::log_softmax(map(num::concat(s, c))); }

Encoded encode(const Encoder& enc, std::span<const LabeledSequence> batch, const Tensor& noise_s,
               const Tensor& noise_c) {
  const auto post = enc.forward(bag_frequencies(batch, enc.dims().vocab));
  return {post, {info::reparam_sample(post.s, noise_s), info::reparam_sample(post.c, noise_c)}};
}

Encoded encode_mean(const Encoder& enc, std::span<const LabeledSequence> batch) {
  const auto post = enc.forward(bag_frequencies(batch, enc.dims().vocab));
  return {post, {post.s.mean, post.c.mean}};
}

std::uint64_t param_hash(std::span<const Tensor> params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& p : params) {
    for (double v : p.data()) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof v);
      for (unsigned char byte : bytes) {
        h ^= byte;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

}  // namespace idel::model
