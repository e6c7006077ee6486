// SPDX-License-Identifier: Apache-2.0
#include "idel/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "idel/cli/report.hpp"
#include "idel/divergences/divergences.hpp"
#include "idel/errors.hpp"
#include "idel/infotheory/gaussian.hpp"
#include "idel/mibounds/estimators.hpp"
#include "idel/model/serialize.hpp"

namespace idel::cli {

namespace fs = std::filesystem;

namespace {

/// fn(0..n-1) on up to `jobs` threads; results and the first failure (by
/// index) come back in index order.
template <class Fn>
auto parallel_map(std::size_t n, std::size_t jobs, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> results(n);
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      results[i].emplace(fn(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min(std::max<std::size_t>(jobs, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) run(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

void prepare_out(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
  if (!f) throw ConfigError("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

model::TrainedModel load_trained(const RunConfig& config) {
  const fs::path path = config.resolved_model_path();
  if (!fs::exists(path)) throw ConfigError("model file not found: " + path.string());
  auto m = model::load_model(path);
  if (m.config.dims.vocab != config.corpus.vocab_size() || m.config.n_classes != config.corpus.n_classes) {
    throw ConfigError("model " + path.string() + " does not match the configured corpus");
  }
  return m;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> row_values(const num::Tensor& t, std::size_t r) {
  const auto d = t.data();
  return {d.begin() + static_cast<std::ptrdiff_t>(r * t.cols()),
          d.begin() + static_cast<std::ptrdiff_t>((r + 1) * t.cols())};
}

struct Estimate {
  double ba, club_full, club_stochastic;
};

Estimate estimate_once(const RunConfig& config, std::size_t replicate) {
  const info::GaussianPairSpec spec{config.mi.rho};
  const std::size_t d = spec.dim();
  num::Rng rng(config.seed, "estimate-mi-" + std::to_string(replicate));
  const EmbeddingBatch batch = info::sample_gaussian_pairs(spec, config.mi.batch, rng);
  const double h_s = info::standard_normal_entropy(d);

  auto run = [&](const mi::GaussianConditional& cond) {
    return Estimate{mi::ba_lower_bound(batch, cond, h_s), mi::club_full(batch, cond).item(),
                    mi::club_stochastic(batch, cond, rng).item()};
  };
  if (config.mi.approximator == "true") return run(mi::AffineGaussianConditional::from_pair_spec(spec));

  mi::CondGaussianNet net(d, d, config.mi.hidden, rng);
  num::Adam adam(net.params(), {.lr = config.mi.lr});
  const EmbeddingBatch fit = info::sample_gaussian_pairs(spec, config.mi.batch, rng);
  mi::fit_approximator(net, adam, fit, config.mi.fit_steps);
  return run(net);
}

}  // namespace

void cmd_estimate_mi(const RunConfig& config, std::ostream& out) {
  prepare_out(config.out);
  const info::GaussianPairSpec spec{config.mi.rho};
  spdlog::info("estimate-mi: {} replicates of M={} ({} approximator)", config.mi.replicates, config.mi.batch,
               config.mi.approximator);
  const auto estimates =
      parallel_map(config.mi.replicates, config.jobs, [&](std::size_t k) { return estimate_once(config, k); });

  auto mean_se = [&](double Estimate::*field) {
    double mean = 0.0;
    for (const auto& e : estimates) mean += e.*field;
    mean /= static_cast<double>(estimates.size());
    double ss = 0.0;
    for (const auto& e : estimates) ss += (e.*field - mean) * (e.*field - mean);
    const double n = static_cast<double>(estimates.size());
    return std::pair{mean, std::sqrt(ss / (n - 1.0) / n)};
  };
  const std::string reps = std::to_string(estimates.size());
  std::string csv = "estimator,mean,se,replicates\n";
  csv += "true_mi," + g17(info::gaussian_mi(spec)) + ",0," + reps + "\n";
  for (const auto& [name, field] : {std::pair{"ba_lower", &Estimate::ba}, std::pair{"club_full", &Estimate::club_full},
                                    std::pair{"club_stochastic", &Estimate::club_stochastic}}) {
    const auto [mean, se] = mean_se(field);
    csv += std::string(name) + "," + g17(mean) + "," + g17(se) + "," + reps + "\n";
  }
  write_file(config.out / "estimate_mi.csv", csv);
  out << csv;
}

void cmd_train(const RunConfig& config, std::ostream& out) {
  prepare_out(config.out);
  write_file(config.out / "config.json", dump_run_config(config, false));

  std::vector<model::Variant> variants{config.train.variant};
  if (config.sweep) {
    variants.clear();
    for (auto v : table_order()) {
      if (config.variants.empty() || std::count(config.variants.begin(), config.variants.end(), v)) {
        variants.push_back(v);
      }
    }
  }
  const auto corpus = train_corpus(config);
  std::optional<EvalData> eval;
  if (config.train.epochs > 0) {
    eval.emplace(prepare_eval(config));
    spdlog::info("evaluation classifier: test accuracy {:.3f}", eval->classifier.test_accuracy());
  }

  auto job = [&](std::size_t i) -> std::optional<ReportRow> {
    const auto variant = variants[i];
    const std::string name(model::variant_name(variant));
    const fs::path metrics_path = config.out / (config.sweep ? "metrics-" + name + ".csv" : "metrics.csv");
    const fs::path model_path = config.sweep ? config.out / ("model-" + name + ".idel") : config.resolved_model_path();
    std::ofstream metrics(metrics_path, std::ios::binary);
    if (!metrics) throw ConfigError("cannot write " + metrics_path.string());
    metrics << model::MetricsRow::csv_header() << '\n' << std::flush;

    model::TrainHooks hooks;
    hooks.on_epoch = [&](const model::MetricsRow& row) {
      metrics << row.csv() << '\n' << std::flush;
      spdlog::info("[{}] epoch {}: loss {:.4f}, club {:.4f}, acc {:.3f}", name, row.epoch, row.loss_total, row.club,
                   row.acc_style);
    };
    auto result = model::train(config.train_config(variant), corpus, hooks);
    model::save_model(result.model, model_path);
    spdlog::debug("[{}] wrote {}", name, model_path.string());
    if (!result.model.trained) return std::nullopt;
    return evaluate_transfer(result.model, *eval, config.eval, config.seed).row;
  };
  const auto rows = parallel_map(variants.size(), config.jobs, job);

  MetricsReport report{.rows = {}, .with_self_bleu = true, .bleu_max_n = config.eval.bleu_max_n};
  for (const auto& r : rows) {
    if (r) report.rows.push_back(*r);
  }
  write_file(config.out / "report.csv", report.csv());
  write_file(config.out / "report.meta.json", report.metadata_json());
  out << report.table();
}

void cmd_ablate(const RunConfig& config, std::ostream& out) {
  RunConfig sweep = config;
  sweep.sweep = true;
  cmd_train(sweep, out);
}

void cmd_divergence(const RunConfig& config, std::ostream& out) {
  const auto m = load_trained(config);
  prepare_out(config.out);
  const auto test = test_corpus(config);
  const auto encoded = model::encode_mean(m.encoder, test);

  std::map<int, std::pair<std::vector<double>, std::vector<double>>> groups;  // label -> (s, c)
  for (std::size_t i = 0; i < test.size(); ++i) {
    auto& [s, c] = groups[test[i].label];
    const auto si = row_values(encoded.sample.s, i), ci = row_values(encoded.sample.c, i);
    s.insert(s.end(), si.begin(), si.end());
    c.insert(c.end(), ci.begin(), ci.end());
  }
  const div::GroundMetric cosine{div::MetricKind::kCosine};
  std::string csv = "embedding," + div::DivergenceRow::csv_header() + "\n";
  for (auto a = groups.begin(); a != groups.end(); ++a) {
    for (auto b = std::next(a); b != groups.end(); ++b) {
      const std::string na = "label" + std::to_string(a->first), nb = "label" + std::to_string(b->first);
      const div::SampleGroup ca(m.config.dims.content, a->second.second, a->first, na);
      const div::SampleGroup cb(m.config.dims.content, b->second.second, b->first, nb);
      const div::SampleGroup sa(m.config.dims.style, a->second.first, a->first, na);
      const div::SampleGroup sb(m.config.dims.style, b->second.first, b->first, nb);
      csv += "content," + div::label_embedding_report(ca, cb, cosine, config.eval.mmd_bandwidth).csv() + "\n";
      csv += "style," + div::label_embedding_report(sa, sb, cosine, config.eval.mmd_bandwidth).csv() + "\n";
    }
  }
  write_file(config.out / "divergence.csv", csv);
  out << csv;
}

void cmd_dump_embeddings(const RunConfig& config, std::ostream& out) {
  const auto m = load_trained(config);
  prepare_out(config.out);
  const auto test = test_corpus(config);
  const auto encoded = model::encode_mean(m.encoder, test);
  std::string lines;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const nlohmann::json j = {
        {"label", test[i].label}, {"s", row_values(encoded.sample.s, i)}, {"c", row_values(encoded.sample.c, i)}};
    lines += j.dump() + "\n";
  }
  write_file(config.out / "embeddings.jsonl", lines);
  out << "wrote " << test.size() << " embeddings to " << (config.out / "embeddings.jsonl").string() << "\n";
}

void cmd_transfer(const RunConfig& config, std::ostream& out) {
  const auto m = load_trained(config);
  prepare_out(config.out);
  const auto data = prepare_eval(config);
  const auto outcome = evaluate_transfer(m, data, config.eval, config.seed);
  std::string lines;
  for (std::size_t i = 0; i < data.test.size(); ++i) {
    const auto& src = data.test[i];
    const auto& sty = data.test[outcome.style_source[i]];
    const nlohmann::json j = {{"content", src.tokens}, {"content_label", src.label}, {"style", sty.tokens},
                              {"target_label", sty.label}, {"output", outcome.outputs[i]}};
    lines += j.dump() + "\n";
  }
  write_file(config.out / "transfer.jsonl", lines);
  const MetricsReport report{{outcome.row}, true, config.eval.bleu_max_n};
  write_file(config.out / "transfer_report.csv", report.csv());
  write_file(config.out / "transfer_report.meta.json", report.metadata_json());
  out << report.table();
}

void cmd_generate(const RunConfig& config, std::ostream& out) {
  const auto m = load_trained(config);
  prepare_out(config.out);
  const auto data = prepare_eval(config);
  const auto outcome = evaluate_generation(m, data, config.eval, config.seed);
  std::string lines;
  for (std::size_t i = 0; i < outcome.outputs.size(); ++i) {
    const auto& src = data.test[outcome.source[i]];
    const nlohmann::json j = {{"style_source", src.tokens}, {"label", src.label}, {"output", outcome.outputs[i]}};
    lines += j.dump() + "\n";
  }
  write_file(config.out / "generate.jsonl", lines);
  const MetricsReport report{{outcome.row}, false, config.eval.bleu_max_n};
  write_file(config.out / "generate_report.csv", report.csv());
  write_file(config.out / "generate_report.meta.json", report.metadata_json());
  out << report.table();
}

void cmd_report(const RunConfig& config, std::ostream& out) {
  const auto report = MetricsReport::parse_csv(read_file(config.out / "report.csv"));
  auto with_meta = report;
  const fs::path meta = config.out / "report.meta.json";
  if (fs::exists(meta)) {
    try {
      with_meta.bleu_max_n = nlohmann::json::parse(read_file(meta)).at("bleu_max_n").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("report metadata: " + std::string(e.what()));
    }
  }
  write_file(config.out / "report.txt", with_meta.table());
  out << with_meta.table();
}

int run_command(std::string_view command, const RunConfig& config, std::ostream& out) {
  static const std::map<std::string_view, void (*)(const RunConfig&, std::ostream&)> table{
      {"estimate-mi", cmd_estimate_mi}, {"train", cmd_train},       {"divergence", cmd_divergence},
      {"dump-embeddings", cmd_dump_embeddings}, {"transfer", cmd_transfer}, {"generate", cmd_generate},
      {"ablate", cmd_ablate},           {"report", cmd_report}};
  const auto it = table.find(command);
  if (it == table.end()) {
    spdlog::error("unknown command '{}'", command);
    return kExitInput;
  }
  try {
    it->second(config, out);
    return kExitOk;
  } catch (const DivergenceError& e) {
    spdlog::error("{}: diverged: {}", command, e.what());
    return kExitDivergence;
  } catch (const ConfigError& e) {
    spdlog::error("{}: {}", command, e.what());
  } catch (const ContractError& e) {
    spdlog::error("{}: {}", command, e.what());
  } catch (const DomainError& e) {
    spdlog::error("{}: {}", command, e.what());
  } catch (const CapacityError& e) {
    spdlog::error("{}: {}", command, e.what());
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}: {}", command, e.what());
  }
  return kExitInput;
}

}  // namespace idel::cli
