// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idel/model/corpus.hpp"
#include "idel/model/losses.hpp"
#include "idel/model/trainer.hpp"

namespace idel::cli {

/// Malformed or unknown configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalSettings {
  std::size_t classifier_train = 2000;
  std::size_t classifier_test = 500;
  std::size_t bleu_max_n = 4;
  /// Cap on references per transferred sentence (same topic, target class).
  std::size_t max_references = 8;
  /// Cap on same-class references per generated sentence.
  std::size_t generation_references = 200;
  std::size_t generate_sources = 100;
  std::size_t generate_per_source = 4;
  double mmd_bandwidth = 1.0;
};

struct MiSettings {
  /// Per-dimension correlations of one GaussianPairSpec.
  std::vector<double> rho{0.8};
  std::size_t batch = 1000;
  std::size_t replicates = 20;
  /// "true" uses the analytic conditional; "learned" fits a CondGaussianNet.
  std::string approximator = "true";
  std::size_t fit_steps = 2000;
  std::size_t hidden = 32;
  double lr = 1e-2;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out = "idel-out";
  /// Model file read by divergence, dump-embeddings, transfer and generate;
  /// empty means <out>/model.idel.
  std::filesystem::path model_path;
  std::size_t jobs = 1;

  model::CorpusSpec corpus;
  std::size_t train_size = 5000;
  std::size_t test_size = 1000;

  /// dims.vocab, n_classes and seed are filled from corpus and seed.
  model::TrainConfig train;
  /// train trains every entry of `variants` instead of train.variant.
  bool sweep = false;
  std::vector<model::Variant> variants;

  EvalSettings eval;
  MiSettings mi;

  /// TrainConfig with the derived fields applied.
  model::TrainConfig train_config(model::Variant variant) const;
  std::filesystem::path resolved_model_path() const;
  void validate() const;
};

/// Variants in ablation-table order: L_VAE, +style, +content recon, no CLUB,
/// full CLUB, stochastic CLUB.
std::vector<model::Variant> table_order();

/// Strict parse: unknown keys, wrong types and invalid values throw
/// ConfigError. Absent keys keep their defaults.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);
/// Canonical JSON (sorted keys); parse_run_config(dump_run_config(c)) == c.
/// Without `runtime`, out, model_path and jobs are left out, since they do
/// not affect results.
std::string dump_run_config(const RunConfig& config, bool runtime = true);

}  // namespace idel::cli
