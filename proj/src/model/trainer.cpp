// SPDX-License-Identifier: Apache-2.0
#include "idel/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "idel/errors.hpp"
#include "idel/mibounds/estimators.hpp"
#include "idel/numcore/adam.hpp"
#include "idel/numcore/ops.hpp"

namespace idel::model {

using num::Tensor;

void TrainConfig::validate() const {
  if (dims.style >= dims.content) throw ContractError("train config: d_s must be smaller than d_c");
  if (batch < 2) throw ContractError("train config: batch must be at least 2");
  if (!(lr > 0.0) || !(approx_lr > 0.0)) throw ContractError("train config: learning rates must be positive");
  if (n_classes < 2) throw ContractError("train config: n_classes must be at least 2");
  if (beta_ramp_epochs == 0) throw ContractError("train config: beta_ramp_epochs must be positive");
}

double beta_at(const TrainConfig& config, std::size_t epoch) {
  if (epoch >= config.beta_ramp_epochs) return 1.0;
  return static_cast<double>(epoch) / static_cast<double>(config.beta_ramp_epochs);
}

std::string MetricsRow::csv_header() { return "epoch,beta,loss_total,loss_vae,club,acc_style,nll_recon,kl"; }

std::string MetricsRow::csv() const {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", epoch, beta, loss_total, loss_vae,
                club, acc_style, nll_recon, kl);
  return buf;
}

TrainedModel TrainedModel::initialize(const TrainConfig& config) {
  config.validate();
  num::Rng rng(config.seed, "init");
  TrainedModel m{config, Encoder(config.dims, rng), Classifier(config.dims.style, config.n_classes, rng),
                 ContentDecoder(config.dims.content, config.dims.vocab, rng),
                 Generator(config.dims.style, config.dims.content, config.dims.vocab, rng), std::nullopt, false};
  m.approximator.emplace(config.dims.content, config.dims.style, config.approx_hidden, rng);
  return m;
}

ModelView TrainedModel::view() const { return {encoder, classifier, decoder, generator, *approximator}; }

std::vector<Tensor> TrainedModel::main_params() const {
  std::vector<Tensor> all = encoder.params();
  for (const auto& group : {classifier.params(), decoder.params(), generator.params()}) {
    all.insert(all.end(), group.begin(), group.end());
  }
  return all;
}

namespace {

double accuracy(const Classifier& clf, const Tensor& s, std::span<const LabeledSequence> batch) {
  const Tensor lp = clf.log_probs(s.detach());
  std::size_t hits = 0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < lp.cols(); ++k) {
      if (lp.at(b, k) > lp.at(b, best)) best = k;
    }
    hits += static_cast<int>(best) == batch[b].label;
  }
  return static_cast<double>(hits) / static_cast<double>(batch.size());
}

}  // namespace

TrainResult train(const TrainConfig& config, std::span<const LabeledSequence> corpus, const TrainHooks& hooks) {
  config.validate();
  if (corpus.size() < 2) throw ContractError("train: corpus needs at least 2 sentences");
  for (const auto& x : corpus) {
    validate_sequence(x, config.dims.vocab);
    if (x.label < 0 || static_cast<std::size_t>(x.label) >= config.n_classes) {
      throw ContractError("train: label " + std::to_string(x.label) + " outside the configured classes");
    }
  }

  TrainResult result{TrainedModel::initialize(config), {}};
  TrainedModel& model = result.model;
  num::Adam adam(model.main_params(), {.lr = config.lr});
  num::Adam approx_adam(model.approximator_params(), {.lr = config.approx_lr});
  num::Rng rng(config.seed, "training");

  const std::size_t m = std::min(config.batch, corpus.size());
  const std::size_t batches = corpus.size() / m;
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<LabeledSequence> batch(m);
  std::vector<std::size_t> negatives(m);
  std::size_t step = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double beta = beta_at(config, epoch);
    std::shuffle(order.begin(), order.end(), rng.engine());
    MetricsRow row{.epoch = epoch, .beta = beta};
    for (std::size_t k = 0; k < batches; ++k, ++step) {
      for (std::size_t j = 0; j < m; ++j) batch[j] = corpus[order[k * m + j]];
      const Tensor noise_s({m, config.dims.style}, rng.normals(m * config.dims.style));
      const Tensor noise_c({m, config.dims.content}, rng.normals(m * config.dims.content));
      try {
        const Encoded encoded = encode(model.encoder, batch, noise_s, noise_c);
        mi::fit_approximator(*model.approximator, approx_adam, encoded.sample, config.approx_steps);
        if (hooks.on_phase) hooks.on_phase(TrainPhase::kApproximatorUpdated, model);

        for (auto& n : negatives) n = rng.index(m);
        const TotalTerms loss = loss_total(model.view(), encoded, batch, beta, config.variant, negatives);
        row.loss_total += loss.total.item();
        row.loss_vae += loss.vae.total.item();
        row.kl += loss.vae.kl.item();
        row.nll_recon += loss.vae.nll.item();
        row.club += mi::club_full(encoded.sample.detached(), *model.approximator).item();
        row.acc_style += accuracy(model.classifier, encoded.posterior.s.mean, batch);

        adam.zero_grad();
        loss.total.backward();
        adam.step();
        if (hooks.on_phase) hooks.on_phase(TrainPhase::kModelUpdated, model);
      } catch (const DivergenceError& e) {
        throw DivergenceError("train: epoch " + std::to_string(epoch) + ", batch " + std::to_string(k) + ": " +
                                  e.what(),
                              step);
      }
    }
    const double inv = 1.0 / static_cast<double>(batches);
    for (double* v : {&row.loss_total, &row.loss_vae, &row.club, &row.acc_style, &row.nll_recon, &row.kl}) *v *= inv;
    result.metrics.push_back(row);
    if (hooks.on_epoch) hooks.on_epoch(row);
  }
  model.trained = config.epochs > 0;
  return result;
}

}  // namespace idel::model
