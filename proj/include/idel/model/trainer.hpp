// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idel/mibounds/conditional.hpp"
#include "idel/model/corpus.hpp"
#include "idel/model/losses.hpp"
#include "idel/model/networks.hpp"

namespace idel::model {

struct TrainConfig {
  EncoderDims dims;
  std::size_t n_classes = 2;
  std::size_t approx_hidden = 32;
  std::size_t batch = 128;
  double lr = 5e-5;
  double approx_lr = 5e-5;
  std::size_t epochs = 30;
  /// beta = min(1, epoch / beta_ramp_epochs), epochs counted from 0.
  std::size_t beta_ramp_epochs = 10;
  std::size_t approx_steps = 1;
  Variant variant = Variant::kFull;
  std::uint64_t seed = 0;

  void validate() const;
};

double beta_at(const TrainConfig& config, std::size_t epoch);

/// Per-epoch means over the epoch's batches. `club` is the full estimator
/// under the approximator as fitted at that batch; `nll_recon` is the
/// generator's per-token NLL; `acc_style` is q_psi's accuracy on the
/// posterior mean of s.
struct MetricsRow {
  std::size_t epoch = 0;
  double beta = 0.0;
  double loss_total = 0.0;
  double loss_vae = 0.0;
  double club = 0.0;
  double acc_style = 0.0;
  double nll_recon = 0.0;
  double kl = 0.0;

  static std::string csv_header();
  std::string csv() const;
};

struct TrainedModel {
  TrainConfig config;
  Encoder encoder;
  Classifier classifier;
  ContentDecoder decoder;
  Generator generator;
  std::optional<mi::CondGaussianNet> approximator;
  bool trained = false;

  /// Fresh parameters from the config's "init" sub-stream.
  static TrainedModel initialize(const TrainConfig& config);

  ModelView view() const;
  /// Encoder, classifier, content decoder, generator, in that order.
  std::vector<num::Tensor> main_params() const;
  std::vector<num::Tensor> approximator_params() const { return approximator->params(); }
};

struct TrainResult {
  TrainedModel model;
  std::vector<MetricsRow> metrics;
};

/// Phase boundaries inside one iteration, for instrumentation.
enum class TrainPhase { kApproximatorUpdated, kModelUpdated };

struct TrainHooks {
  std::function<void(const MetricsRow&)> on_epoch;
  std::function<void(TrainPhase, const TrainedModel&)> on_phase;
};

/// Alternating optimization: per batch, fit the approximator on detached
/// samples, then step every other parameter on loss_total with the
/// approximator frozen. Throws DivergenceError carrying the global step.
TrainResult train(const TrainConfig& config, std::span<const LabeledSequence> corpus, const TrainHooks& hooks = {});

}  // namespace idel::model
