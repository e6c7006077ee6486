// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "idel/model/style_classifier.hpp"

namespace idel::cli {

using Sentence = std::vector<std::uint32_t>;

/// Unsmoothed corpus BLEU in [0, 1]. Clipped n-gram matches use, per
/// n-gram, the largest count in any of the hypothesis's references; the
/// brevity penalty uses, per hypothesis, the closest reference length
/// (shorter on ties). Any zero precision gives 0.
double corpus_bleu(std::span<const Sentence> hypotheses, std::span<const std::vector<Sentence>> references,
                   std::size_t max_n = 4);
/// One reference per hypothesis.
double corpus_bleu(std::span<const Sentence> hypotheses, std::span<const Sentence> references, std::size_t max_n = 4);

/// Mean over pairs of the single-pair corpus BLEU of transferred[i] against
/// originals[i].
double self_bleu(std::span<const Sentence> originals, std::span<const Sentence> transferred, std::size_t max_n = 4);

/// (prod v_i)^(1/k) via the mean log. Throws DomainError on a value <= 0 or
/// non-finite, ContractError on an empty list.
double geometric_mean(std::span<const double> values);

/// Fraction of sentences the pretrained classifier assigns to its target.
double style_accuracy(const model::StyleClassifier& clf, std::span<const Sentence> sentences,
                      std::span<const int> target_labels);

}  // namespace idel::cli
