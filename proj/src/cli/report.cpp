// SPDX-License-Identifier: Apache-2.0
#include "idel/cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "idel/errors.hpp"
#include "idel/numcore/rng.hpp"

namespace idel::cli {

namespace {

constexpr const char* kHeaderWithSelf = "variant,acc,bleu,self_bleu,gm";
constexpr const char* kHeaderNoSelf = "variant,acc,bleu,gm";

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

double parse_double(const std::string& field) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) throw ConfigError("report: bad number '" + field + "'");
  return v;
}

Sentence sorted(Sentence s) {
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

double report_gm(std::span<const double> percents) {
  if (std::any_of(percents.begin(), percents.end(), [](double v) { return v == 0.0; })) return 0.0;
  return geometric_mean(percents);
}

ReportRow make_row(std::string variant, double acc, double bleu, std::optional<double> self_bleu) {
  std::vector<double> entries{acc, bleu};
  if (self_bleu) entries.push_back(*self_bleu);
  return {std::move(variant), acc, bleu, self_bleu, report_gm(entries)};
}

std::string MetricsReport::csv() const {
  std::string out = std::string(with_self_bleu ? kHeaderWithSelf : kHeaderNoSelf) + "\n";
  for (const auto& r : rows) {
    out += r.variant + "," + g17(r.acc) + "," + g17(r.bleu) + ",";
    if (with_self_bleu) out += g17(r.self_bleu.value_or(0.0)) + ",";
    out += g17(r.gm) + "\n";
  }
  return out;
}

std::string MetricsReport::metadata_json() const {
  const nlohmann::json j = {{"bleu_max_n", bleu_max_n},
                            {"bleu_smoothing", "none"},
                            {"bleu_tokens", "sorted bag"},
                            {"gm_scale", "raw percentages"},
                            {"columns", with_self_bleu ? kHeaderWithSelf : kHeaderNoSelf}};
  return j.dump(2) + "\n";
}

std::string MetricsReport::table() const {
  std::size_t width = 7;
  for (const auto& r : rows) width = std::max(width, r.variant.size());
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s %7s %7s", static_cast<int>(width), "variant", "ACC", "BLEU");
  out += buf;
  if (with_self_bleu) out += "  S-BLEU";
  out += "      GM\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s %7.1f %7.1f", static_cast<int>(width), r.variant.c_str(), r.acc, r.bleu);
    out += buf;
    if (with_self_bleu) {
      std::snprintf(buf, sizeof buf, " %7.1f", r.self_bleu.value_or(0.0));
      out += buf;
    }
    std::snprintf(buf, sizeof buf, " %7.1f\n", r.gm);
    out += buf;
  }
  out += "BLEU max_n=" + std::to_string(bleu_max_n) + ", no smoothing\n";
  return out;
}

MetricsReport MetricsReport::parse_csv(std::string_view text) {
  std::vector<std::string> lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ConfigError("report: empty file");
  MetricsReport report;
  if (lines[0] == kHeaderNoSelf) {
    report.with_self_bleu = false;
  } else if (lines[0] != kHeaderWithSelf) {
    throw ConfigError("report: unexpected header '" + lines[0] + "'");
  }
  const std::size_t fields = report.with_self_bleu ? 5 : 4;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != fields) throw ConfigError("report: line " + std::to_string(i + 1) + " has the wrong field count");
    std::optional<double> self;
    if (report.with_self_bleu) self = parse_double(f[3]);
    ReportRow row = make_row(f[0], parse_double(f[1]), parse_double(f[2]), self);
    const double printed = parse_double(f.back());
    if (std::abs(printed - row.gm) > 1e-9 * std::max(1.0, std::abs(row.gm))) {
      throw ConfigError("report: GM of '" + f[0] + "' is " + f.back() + " but its entries give " + g17(row.gm));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<model::LabeledSequence> train_corpus(const RunConfig& config) {
  return model::make_corpus(config.corpus, config.train_size, config.seed);
}

std::vector<model::LabeledSequence> test_corpus(const RunConfig& config) {
  return model::make_corpus(config.corpus, config.test_size, num::derive_seed(config.seed, "test-corpus"));
}

EvalData prepare_eval(const RunConfig& config) {
  EvalData data{test_corpus(config), model::StyleClassifier(config.corpus.vocab_size(), config.corpus.n_classes)};
  const auto pool = model::make_corpus(config.corpus, config.eval.classifier_train + config.eval.classifier_test,
                                       num::derive_seed(config.seed, "classifier-corpus"));
  const std::span<const model::LabeledSequence> all(pool);
  data.classifier.pretrain(all.first(config.eval.classifier_train), all.subspan(config.eval.classifier_train),
                           {.seed = config.seed});
  return data;
}

TransferOutcome evaluate_transfer(const model::TrainedModel& model, const EvalData& data, const EvalSettings& eval,
                                  std::uint64_t seed) {
  const auto& test = data.test;
  const std::size_t n = test.size();
  num::Rng rng(seed, "evaluation");
  TransferOutcome out;
  out.style_source.resize(n);
  std::vector<model::LabeledSequence> styles(n);
  std::vector<int> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.style_source[i] = rng.index(n);
    styles[i] = test[out.style_source[i]];
    targets[i] = styles[i].label;
  }
  out.outputs = model::transfer_batch(model, test, styles);

  std::vector<Sentence> originals(n);
  std::vector<std::vector<Sentence>> refs(n);
  for (std::size_t i = 0; i < n; ++i) {
    originals[i] = sorted(test[i].tokens);
    for (std::size_t k = 0; k < n && refs[i].size() < eval.max_references; ++k) {
      if (k != i && test[k].topic == test[i].topic && test[k].label == targets[i]) {
        refs[i].push_back(sorted(test[k].tokens));
      }
    }
    if (refs[i].empty()) refs[i].push_back(originals[i]);
  }
  const double acc = style_accuracy(data.classifier, out.outputs, targets);
  const double bleu = corpus_bleu(out.outputs, refs, eval.bleu_max_n);
  const double self = self_bleu(originals, out.outputs, eval.bleu_max_n);
  out.row = make_row(std::string(model::variant_name(model.config.variant)), 100.0 * acc, 100.0 * bleu, 100.0 * self);
  return out;
}

GenerationOutcome evaluate_generation(const model::TrainedModel& model, const EvalData& data,
                                      const EvalSettings& eval, std::uint64_t seed) {
  const auto& test = data.test;
  const std::size_t sources = std::min(eval.generate_sources, test.size());
  if (sources == 0 || eval.generate_per_source == 0) throw ConfigError("generate: nothing to generate");

  std::vector<std::vector<Sentence>> by_label(model.config.n_classes);
  for (const auto& x : test) {
    auto& bucket = by_label[static_cast<std::size_t>(x.label)];
    if (bucket.size() < eval.generation_references) bucket.push_back(sorted(x.tokens));
  }

  GenerationOutcome out;
  std::vector<int> targets;
  std::vector<std::vector<Sentence>> refs;
  for (std::size_t i = 0; i < sources; ++i) {
    const auto generated =
        model::conditional_generate(model, test[i], model::FixedFactor::kStyle, eval.generate_per_source,
                                    num::derive_seed(seed, "generation-" + std::to_string(i)));
    const auto& bucket = by_label[static_cast<std::size_t>(test[i].label)];
    for (const auto& g : generated) {
      out.source.push_back(i);
      out.outputs.push_back(g);
      targets.push_back(test[i].label);
      refs.push_back(bucket.empty() ? std::vector<Sentence>{sorted(test[i].tokens)} : bucket);
    }
  }
  const double acc = style_accuracy(data.classifier, out.outputs, targets);
  const double bleu = corpus_bleu(out.outputs, refs, eval.bleu_max_n);
  out.row = make_row(std::string(model::variant_name(model.config.variant)), 100.0 * acc, 100.0 * bleu, std::nullopt);
  return out;
}

}  // namespace idel::cli
