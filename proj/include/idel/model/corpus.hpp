// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "idel/numcore/rng.hpp"
#include "idel/numcore/tensor.hpp"

namespace idel::model {

/// A synthetic "sentence": token ids with a style label. `topic` records the
/// generating content topic (-1 when unknown) and is never seen by a model.
struct LabeledSequence {
  std::vector<std::uint32_t> tokens;
  int label = 0;
  int topic = -1;
};

/// Style tokens occupy [0, n_classes * style_tokens_per_class), class y owning
/// the y-th block; content tokens follow, topic t owning the t-th block of
/// tokens_per_topic ids. With probability topic_skew a sentence's topic is
/// drawn from its class's own topics (t mod n_classes == y), otherwise
/// uniformly, so content carries some label information.
struct CorpusSpec {
  std::size_t n_classes = 2;
  std::size_t topics = 8;
  std::size_t tokens_per_topic = 23;
  std::size_t style_tokens_per_class = 8;
  std::size_t length = 12;
  double style_rate = 0.25;
  double topic_skew = 0.5;

  std::size_t vocab_size() const { return n_classes * style_tokens_per_class + topics * tokens_per_topic; }
  std::size_t content_tokens() const;
  std::size_t style_tokens() const { return length - content_tokens(); }
  std::uint32_t style_begin(int label) const;
  std::uint32_t content_begin(int topic) const;
  void validate() const;
  int draw_topic(int label, num::Rng& rng) const;
};

/// n sentences from Rng(seed, "corpus"), each with a uniform label, a topic, ceil((1 - pi_s) L)
/// content tokens (leaving at least one style token), shuffled.
std::vector<LabeledSequence> make_corpus(const CorpusSpec& spec, std::size_t n, std::uint64_t seed);

/// Throws ContractError on an empty sequence or an id >= vocab.
void validate_sequence(const LabeledSequence& x, std::size_t vocab);

/// Token counts [B, V] and per-row frequencies counts / length.
num::Tensor bag_counts(std::span<const LabeledSequence> batch, std::size_t vocab);
num::Tensor bag_frequencies(std::span<const LabeledSequence> batch, std::size_t vocab);

}  // namespace idel::model
