// SPDX-License-Identifier: Apache-2.0
#include "idel/model/generation.hpp"

#include <algorithm>
#include <cmath>

#include "idel/errors.hpp"
#include "idel/numcore/ops.hpp"
#include "idel/numcore/rng.hpp"

namespace idel::model {

using num::Tensor;

namespace {

void require_trained(const TrainedModel& model, const char* op) {
  if (!model.trained) throw ContractError(std::string(op) + ": model has not been trained");
}

// Repeats one [1, d] row n times.
Tensor tile(const Tensor& row, std::size_t n) {
  std::vector<double> out;
  out.reserve(n * row.size());
  for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), row.data().begin(), row.data().end());
  return Tensor({n, row.size()}, std::move(out));
}

}  // namespace

std::vector<TokenList> greedy_decode(const Tensor& log_probs, std::size_t length) {
  if (log_probs.rank() != 2) throw DimensionError("greedy_decode: expected [B, V] log-probabilities");
  const std::size_t vocab = log_probs.cols();
  std::vector<TokenList> out(log_probs.rows());
  std::vector<double> target(vocab);
  std::vector<std::size_t> count(vocab);
  for (std::size_t b = 0; b < out.size(); ++b) {
    for (std::size_t v = 0; v < vocab; ++v) target[v] = static_cast<double>(length) * std::exp(log_probs.at(b, v));
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t k = 0; k < length; ++k) {
      std::size_t best = 0;
      for (std::size_t v = 1; v < vocab; ++v) {
        if (target[v] - static_cast<double>(count[v]) > target[best] - static_cast<double>(count[best])) best = v;
      }
      ++count[best];
    }
    for (std::size_t v = 0; v < vocab; ++v) out[b].insert(out[b].end(), count[v], static_cast<std::uint32_t>(v));
  }
  return out;
}

std::vector<TokenList> transfer_batch(const TrainedModel& model, std::span<const LabeledSequence> contents,
                                      std::span<const LabeledSequence> styles) {
  require_trained(model, "transfer");
  if (contents.size() != styles.size()) throw ContractError("transfer: content and style lists differ in length");
  if (contents.empty()) return {};
  const Encoded c = encode_mean(model.encoder, contents);
  const Encoded s = encode_mean(model.encoder, styles);
  const Tensor lp = model.generator.log_probs(s.sample.s, c.sample.c);
  std::vector<TokenList> out(contents.size());
  for (std::size_t i = 0; i < contents.size(); ++i) {
    const Tensor row({1, lp.cols()}, {lp.data().begin() + i * lp.cols(), lp.data().begin() + (i + 1) * lp.cols()});
    out[i] = std::move(greedy_decode(row, contents[i].tokens.size())[0]);
  }
  return out;
}

TokenList transfer(const TrainedModel& model, const LabeledSequence& x_content, const LabeledSequence& x_style) {
  return std::move(transfer_batch(model, std::span(&x_content, 1), std::span(&x_style, 1))[0]);
}

std::vector<TokenList> conditional_generate(const TrainedModel& model, const LabeledSequence& x, FixedFactor fixed,
                                            std::size_t n, std::uint64_t seed) {
  require_trained(model, "conditional_generate");
  validate_sequence(x, model.encoder.dims().vocab);
  if (n == 0) return {};
  const Encoded e = encode_mean(model.encoder, std::span(&x, 1));
  num::Rng rng(seed, "generation");
  const auto& dims = model.encoder.dims();
  Tensor s, c;
  if (fixed == FixedFactor::kStyle) {
    s = tile(e.sample.s, n);
    c = Tensor({n, dims.content}, rng.normals(n * dims.content));
  } else {
    s = Tensor({n, dims.style}, rng.normals(n * dims.style));
    c = tile(e.sample.c, n);
  }
  return greedy_decode(model.generator.log_probs(s, c), x.tokens.size());
}

}  // namespace idel::model
