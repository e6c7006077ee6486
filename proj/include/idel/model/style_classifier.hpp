// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "idel/model/corpus.hpp"
#include "idel/model/networks.hpp"

namespace idel::model {

/// Evaluation-only style classifier, separate from q_psi: multinomial
/// logistic regression on bag-of-words frequencies.
class StyleClassifier {
 public:
  static constexpr double kRequiredAccuracy = 0.95;

  struct FitConfig {
    std::size_t epochs = 10;
    std::size_t batch = 64;
    double lr = 0.05;
    std::uint64_t seed = 0;
  };

  StyleClassifier(std::size_t vocab, std::size_t n_classes);

  /// Fits on `train`, then scores `test`. Throws ContractError when the test
  /// accuracy is below kRequiredAccuracy; the classifier is then unusable.
  double pretrain(std::span<const LabeledSequence> train, std::span<const LabeledSequence> test,
                  const FitConfig& config);

  bool trained() const { return trained_; }
  double test_accuracy() const { return test_accuracy_; }
  std::size_t vocab() const { return vocab_; }

  /// Throws ContractError before a successful pretrain.
  std::vector<int> predict(std::span<const std::vector<std::uint32_t>> sentences) const;

 private:
  std::vector<int> argmax_rows(std::span<const LabeledSequence> batch) const;

  std::size_t vocab_, n_classes_;
  Linear map_;
  bool trained_ = false;
  double test_accuracy_ = 0.0;
};

}  // namespace idel::model
