// SPDX-License-Identifier: Apache-2.0
#include "idel/cli/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "idel/errors.hpp"

namespace idel::cli {

namespace {

using Counts = std::map<Sentence, std::size_t>;

Counts ngram_counts(const Sentence& s, std::size_t n) {
  Counts out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) ++out[Sentence(s.begin() + i, s.begin() + i + n)];
  return out;
}

void check_order(std::size_t max_n) {
  if (max_n < 1 || max_n > 4) throw ContractError("bleu: max_n must lie in [1, 4], got " + std::to_string(max_n));
}

}  // namespace

double corpus_bleu(std::span<const Sentence> hypotheses, std::span<const std::vector<Sentence>> references,
                   std::size_t max_n) {
  check_order(max_n);
  if (hypotheses.empty()) throw ContractError("bleu: empty hypothesis set");
  if (references.size() != hypotheses.size()) throw ContractError("bleu: one reference set per hypothesis required");

  std::vector<double> matched(max_n, 0.0), total(max_n, 0.0);
  double hyp_len = 0.0, ref_len = 0.0;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const auto& hyp = hypotheses[i];
    const auto& refs = references[i];
    if (refs.empty()) throw ContractError("bleu: hypothesis " + std::to_string(i) + " has no reference");
    hyp_len += static_cast<double>(hyp.size());
    std::size_t closest = refs.front().size();
    for (const auto& r : refs) {
      const auto d = std::labs(static_cast<long>(r.size()) - static_cast<long>(hyp.size()));
      const auto best = std::labs(static_cast<long>(closest) - static_cast<long>(hyp.size()));
      if (d < best || (d == best && r.size() < closest)) closest = r.size();
    }
    ref_len += static_cast<double>(closest);

    for (std::size_t n = 1; n <= max_n; ++n) {
      Counts max_ref;
      for (const auto& r : refs) {
        for (const auto& [gram, c] : ngram_counts(r, n)) max_ref[gram] = std::max(max_ref[gram], c);
      }
      for (const auto& [gram, c] : ngram_counts(hyp, n)) {
        const auto it = max_ref.find(gram);
        if (it != max_ref.end()) matched[n - 1] += static_cast<double>(std::min(c, it->second));
        total[n - 1] += static_cast<double>(c);
      }
    }
  }
  double log_p = 0.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    if (matched[n] == 0.0) return 0.0;
    log_p += std::log(matched[n] / total[n]);
  }
  const double bp = hyp_len >= ref_len ? 0.0 : 1.0 - ref_len / hyp_len;
  return std::exp(log_p / static_cast<double>(max_n) + bp);
}

double corpus_bleu(std::span<const Sentence> hypotheses, std::span<const Sentence> references, std::size_t max_n) {
  std::vector<std::vector<Sentence>> wrapped;
  wrapped.reserve(references.size());
  for (const auto& r : references) wrapped.push_back({r});
  return corpus_bleu(hypotheses, wrapped, max_n);
}

double self_bleu(std::span<const Sentence> originals, std::span<const Sentence> transferred, std::size_t max_n) {
  if (originals.size() != transferred.size()) throw ContractError("self_bleu: list lengths differ");
  if (originals.empty()) throw ContractError("self_bleu: empty lists");
  double sum = 0.0;
  for (std::size_t i = 0; i < originals.size(); ++i) {
    sum += corpus_bleu(transferred.subspan(i, 1), originals.subspan(i, 1), max_n);
  }
  return sum / static_cast<double>(originals.size());
}

double geometric_mean(std::span<const double> values) {
  if (values.empty()) throw ContractError("geometric_mean: empty list");
  double log_sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("geometric_mean: values must be positive and finite");
    log_sum += std::log(v);
  }
  return std::exp(log_sum / static_cast<double>(values.size()));
}

double style_accuracy(const model::StyleClassifier& clf, std::span<const Sentence> sentences,
                      std::span<const int> target_labels) {
  if (sentences.size() != target_labels.size()) throw ContractError("style_accuracy: one target per sentence");
  if (sentences.empty()) throw ContractError("style_accuracy: no sentences");
  const auto predicted = clf.predict(sentences);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == target_labels[i];
  return static_cast<double>(hits) / static_cast<double>(sentences.size());
}

}  // namespace idel::cli
