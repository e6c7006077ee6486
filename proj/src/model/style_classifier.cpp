// SPDX-License-Identifier: Apache-2.0
#include "idel/model/style_classifier.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "idel/errors.hpp"
#include "idel/numcore/adam.hpp"
#include "idel/numcore/ops.hpp"
#include "idel/numcore/rng.hpp"

namespace idel::model {

using num::Tensor;

StyleClassifier::StyleClassifier(std::size_t vocab, std::size_t n_classes) : vocab_(vocab), n_classes_(n_classes) {
  if (vocab == 0 || n_classes < 2) throw ContractError("style classifier: need vocab > 0 and at least 2 classes");
  map_.w = Tensor::zeros({vocab, n_classes}, true);
  map_.b = Tensor::zeros({n_classes}, true);
}

std::vector<int> StyleClassifier::argmax_rows(std::span<const LabeledSequence> batch) const {
  const Tensor logits = map_(bag_frequencies(batch, vocab_));
  std::vector<int> out(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < n_classes_; ++k) {
      if (logits.at(b, k) > logits.at(b, best)) best = k;
    }
    out[b] = static_cast<int>(best);
  }
  return out;
}

double StyleClassifier::pretrain(std::span<const LabeledSequence> train, std::span<const LabeledSequence> test,
                                 const FitConfig& config) {
  if (train.empty() || test.empty()) throw ContractError("style classifier: empty train or test split");
  if (config.batch == 0) throw ContractError("style classifier: batch must be positive");
  for (const auto& x : train) {
    if (x.label < 0 || static_cast<std::size_t>(x.label) >= n_classes_) {
      throw ContractError("style classifier: label " + std::to_string(x.label) + " out of range");
    }
  }
  trained_ = false;
  num::Adam adam({map_.w, map_.b}, {.lr = config.lr});
  num::Rng rng(config.seed, "eval-classifier");
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<LabeledSequence> batch;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (std::size_t start = 0; start < order.size(); start += config.batch) {
      const std::size_t end = std::min(order.size(), start + config.batch);
      batch.clear();
      std::vector<std::size_t> picks;
      for (std::size_t i = start; i < end; ++i) {
        picks.push_back(batch.size() * n_classes_ + static_cast<std::size_t>(train[order[i]].label));
        batch.push_back(train[order[i]]);
      }
      const Tensor lp = num::log_softmax(map_(bag_frequencies(batch, vocab_)));
      const Tensor loss = -num::mean(num::take(lp, picks));
      adam.zero_grad();
      loss.backward();
      adam.step();
    }
  }
  const auto predicted = argmax_rows(test);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < test.size(); ++i) hits += predicted[i] == test[i].label;
  test_accuracy_ = static_cast<double>(hits) / static_cast<double>(test.size());
  if (test_accuracy_ < kRequiredAccuracy) {
    throw ContractError("style classifier: test accuracy " + std::to_string(test_accuracy_) + " below " +
                        std::to_string(kRequiredAccuracy));
  }
  trained_ = true;
  return test_accuracy_;
}

std::vector<int> StyleClassifier::predict(std::span<const std::vector<std::uint32_t>> sentences) const {
  if (!trained_) throw ContractError("style classifier: not pretrained");
  if (sentences.empty()) return {};
  std::vector<LabeledSequence> batch(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) batch[i].tokens = sentences[i];
  return argmax_rows(batch);
}

}  // namespace idel::model
