// SPDX-License-Identifier: Apache-2.0
#include "idel/model/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idel/errors.hpp"
#include "idel/numcore/rng.hpp"

namespace idel::model {

std::size_t CorpusSpec::content_tokens() const {
  const auto n = static_cast<std::size_t>(std::ceil((1.0 - style_rate) * static_cast<double>(length) - 1e-9));
  return std::min(n, length - 1);
}

std::uint32_t CorpusSpec::style_begin(int label) const {
  return static_cast<std::uint32_t>(static_cast<std::size_t>(label) * style_tokens_per_class);
}

std::uint32_t CorpusSpec::content_begin(int topic) const {
  return static_cast<std::uint32_t>(n_classes * style_tokens_per_class +
                                    static_cast<std::size_t>(topic) * tokens_per_topic);
}

void CorpusSpec::validate() const {
  if (n_classes < 2) throw ContractError("corpus spec: n_classes must be at least 2");
  if (topics == 0 || tokens_per_topic == 0 || style_tokens_per_class == 0) {
    throw ContractError("corpus spec: token ranges must be non-empty");
  }
  if (length < 2) throw ContractError("corpus spec: length must be at least 2");
  if (!(style_rate > 0.0 && style_rate < 1.0)) throw ContractError("corpus spec: style_rate must lie in (0, 1)");
  if (!(topic_skew >= 0.0 && topic_skew < 1.0)) throw ContractError("corpus spec: topic_skew must lie in [0, 1)");
  if (topic_skew > 0.0 && topics < n_classes) throw ContractError("corpus spec: topic_skew needs topics >= n_classes");
}

int CorpusSpec::draw_topic(int label, num::Rng& rng) const {
  if (rng.uniform() < topic_skew) {
    const std::size_t y = static_cast<std::size_t>(label);
    const std::size_t owned = (topics - y + n_classes - 1) / n_classes;
    return static_cast<int>(y + n_classes * rng.index(owned));
  }
  return static_cast<int>(rng.index(topics));
}

std::vector<LabeledSequence> make_corpus(const CorpusSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  num::Rng rng(seed, "corpus");
  const std::size_t n_content = spec.content_tokens();
  std::vector<LabeledSequence> out(n);
  for (auto& x : out) {
    x.label = static_cast<int>(rng.index(spec.n_classes));
    x.topic = spec.draw_topic(x.label, rng);
    x.tokens.reserve(spec.length);
    for (std::size_t k = 0; k < spec.length; ++k) {
      x.tokens.push_back(k < n_content
                             ? spec.content_begin(x.topic) + static_cast<std::uint32_t>(rng.index(spec.tokens_per_topic))
                             : spec.style_begin(x.label) +
                                   static_cast<std::uint32_t>(rng.index(spec.style_tokens_per_class)));
    }
    std::shuffle(x.tokens.begin(), x.tokens.end(), rng.engine());
  }
  return out;
}

void validate_sequence(const LabeledSequence& x, std::size_t vocab) {
  if (x.tokens.empty()) throw ContractError("sequence: empty token list");
  for (auto t : x.tokens) {
    if (t >= vocab) {
      throw ContractError("sequence: token " + std::to_string(t) + " outside vocabulary of size " +
                          std::to_string(vocab));
    }
  }
}

num::Tensor bag_counts(std::span<const LabeledSequence> batch, std::size_t vocab) {
  if (batch.empty()) throw ContractError("bag_counts: empty batch");
  std::vector<double> counts(batch.size() * vocab, 0.0);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    validate_sequence(batch[b], vocab);
    for (auto t : batch[b].tokens) counts[b * vocab + t] += 1.0;
  }
  return num::Tensor({batch.size(), vocab}, std::move(counts));
}

num::Tensor bag_frequencies(std::span<const LabeledSequence> batch, std::size_t vocab) {
  num::Tensor counts = bag_counts(batch, vocab);
  auto data = counts.mutable_data();
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const double inv = 1.0 / static_cast<double>(batch[b].tokens.size());
    for (std::size_t v = 0; v < vocab; ++v) data[b * vocab + v] *= inv;
  }
  return counts;
}

}  // namespace idel::model
