// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idel/embedding.hpp"
#include "idel/infotheory/gaussian.hpp"
#include "idel/model/corpus.hpp"
#include "idel/numcore/rng.hpp"
#include "idel/numcore/tensor.hpp"

namespace idel::model {

/// x W + b with W [in, out].
struct Linear {
  num::Tensor w;
  num::Tensor b;

  Linear() = default;
  Linear(std::size_t in, std::size_t out, num::Rng& rng);
  num::Tensor operator()(const num::Tensor& x) const;
  std::size_t in() const { return w.rows(); }
  std::size_t out() const { return w.cols(); }
};

struct EncoderDims {
  std::size_t vocab = 200;
  std::size_t embed = 16;
  std::size_t hidden = 32;
  std::size_t style = 4;
  std::size_t content = 16;
};

/// q(s|x) q(c|x): mean token embedding, one tanh layer shared by four linear
/// heads.
class Encoder {
 public:
  Encoder() = default;
  Encoder(const EncoderDims& dims, num::Rng& rng);

  struct Posterior {
    info::DiagGaussian s;
    info::DiagGaussian c;
  };
  /// `freqs` is [B, V] with rows summing to one. Throws DivergenceError
  /// (step 0) when a posterior parameter is non-finite.
  Posterior forward(const num::Tensor& freqs) const;

  const EncoderDims& dims() const { return dims_; }
  /// embedding, trunk, mu_s, logvar_s, mu_c, logvar_c (weight then bias).
  std::vector<num::Tensor> params() const;

 private:
  EncoderDims dims_;
  num::Tensor embedding_;
  Linear trunk_, mu_s_, lv_s_, mu_c_, lv_c_;
};

/// q_psi(y | s): one affine map to class logits.
struct Classifier {
  Linear map;

  Classifier() = default;
  Classifier(std::size_t style_dim, std::size_t n_classes, num::Rng& rng) : map(style_dim, n_classes, rng) {}
  num::Tensor log_probs(const num::Tensor& s) const;
  std::vector<num::Tensor> params() const { return {map.w, map.b}; }
};

/// q_phi(x | c): bag-of-words categorical over the vocabulary.
struct ContentDecoder {
  Linear map;

  ContentDecoder() = default;
  ContentDecoder(std::size_t content_dim, std::size_t vocab, num::Rng& rng) : map(content_dim, vocab, rng) {}
  num::Tensor log_probs(const num::Tensor& c) const;
  std::vector<num::Tensor> params() const { return {map.w, map.b}; }
};

/// p_gamma(x | s, c): bag-of-words categorical from [s, c].
struct Generator {
  Linear map;

  Generator() = default;
  Generator(std::size_t style_dim, std::size_t content_dim, std::size_t vocab, num::Rng& rng)
      : map(style_dim + content_dim, vocab, rng) {}
  num::Tensor log_probs(const num::Tensor& s, const num::Tensor& c) const;
  std::vector<num::Tensor> params() const { return {map.w, map.b}; }
};

/// Reparameterized draws with externally supplied standard-normal noise
/// ([B, d_s] and [B, d_c]).
struct Encoded {
  Encoder::Posterior posterior;
  EmbeddingBatch sample;
};
Encoded encode(const Encoder& enc, std::span<const LabeledSequence> batch, const num::Tensor& noise_s,
               const num::Tensor& noise_c);
/// Posterior means (zero noise).
Encoded encode_mean(const Encoder& enc, std::span<const LabeledSequence> batch);

/// FNV-1a over the raw bytes of every value, in order.
std::uint64_t param_hash(std::span<const num::Tensor> params);

}  // namespace idel::model
