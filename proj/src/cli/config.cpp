// SPDX-License-Identifier: Apache-2.0
#include "idel/cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "idel/errors.hpp"

namespace idel::cli {

using nlohmann::json;

namespace {

// Reads members of one JSON object, rejecting any key it was not asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  template <class T>
  void get(const char* key, T& into) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      into = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where() + "." + key + ": " + e.what());
    }
  }

  void get(const char* key, std::size_t& into) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!it->is_number_unsigned()) throw ConfigError(where() + "." + key + ": expected a non-negative integer");
    into = it->get<std::size_t>();
  }

  void get(const char* key, double& into) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!it->is_number()) throw ConfigError(where() + "." + key + ": expected a number");
    into = it->get<double>();
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown key '" + key + "' in " + where());
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

model::Variant variant_from(const std::string& name) {
  try {
    return model::parse_variant(name);
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

std::vector<model::Variant> table_order() {
  using model::Variant;
  return {Variant::kVaeOnly, Variant::kVaeStyle,          Variant::kVaeRecon,
          Variant::kNoClub,  Variant::kFullNonStochastic, Variant::kFull};
}

model::TrainConfig RunConfig::train_config(model::Variant variant) const {
  model::TrainConfig t = train;
  t.dims.vocab = corpus.vocab_size();
  t.n_classes = corpus.n_classes;
  t.seed = seed;
  t.variant = variant;
  return t;
}

std::filesystem::path RunConfig::resolved_model_path() const {
  return model_path.empty() ? out / "model.idel" : model_path;
}

void RunConfig::validate() const {
  auto wrap = [](auto&& fn) {
    try {
      fn();
    } catch (const ContractError& e) {
      throw ConfigError(e.what());
    }
  };
  wrap([&] { corpus.validate(); });
  wrap([&] { train_config(train.variant).validate(); });
  if (jobs == 0) throw ConfigError("jobs must be at least 1");
  if (train_size < 2) throw ConfigError("corpus.train_size must be at least 2");
  if (test_size < 2) throw ConfigError("corpus.test_size must be at least 2");
  if (eval.bleu_max_n < 1 || eval.bleu_max_n > 4) throw ConfigError("eval.bleu_max_n must lie in [1, 4]");
  if (eval.max_references == 0 || eval.generation_references == 0) {
    throw ConfigError("eval reference caps must be positive");
  }
  if (!(eval.mmd_bandwidth > 0.0)) throw ConfigError("eval.mmd_bandwidth must be positive");
  if (mi.rho.empty()) throw ConfigError("estimate_mi.rho must be non-empty");
  for (double r : mi.rho) {
    if (!(r > -1.0 && r < 1.0)) throw ConfigError("estimate_mi.rho entries must lie in (-1, 1)");
  }
  if (mi.batch < 2 || mi.replicates < 2) throw ConfigError("estimate_mi needs batch >= 2 and replicates >= 2");
  if (mi.approximator != "true" && mi.approximator != "learned") {
    throw ConfigError("estimate_mi.approximator must be \"true\" or \"learned\"");
  }
  if (!(mi.lr > 0.0) || mi.hidden == 0) throw ConfigError("estimate_mi.lr and hidden must be positive");
}

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  Section top(root, "");
  top.get("seed", c.seed);
  std::string out = c.out.string(), model_path;
  top.get("out", out);
  top.get("model_path", model_path);
  c.out = out;
  c.model_path = model_path;
  top.get("jobs", c.jobs);

  if (const json* j = top.child("corpus")) {
    Section s(*j, "corpus");
    s.get("n_classes", c.corpus.n_classes);
    s.get("topics", c.corpus.topics);
    s.get("tokens_per_topic", c.corpus.tokens_per_topic);
    s.get("style_tokens_per_class", c.corpus.style_tokens_per_class);
    s.get("length", c.corpus.length);
    s.get("style_rate", c.corpus.style_rate);
    s.get("topic_skew", c.corpus.topic_skew);
    s.get("train_size", c.train_size);
    s.get("test_size", c.test_size);
    s.finish();
  }
  if (const json* j = top.child("train")) {
    Section s(*j, "train");
    s.get("embed", c.train.dims.embed);
    s.get("hidden", c.train.dims.hidden);
    s.get("style_dim", c.train.dims.style);
    s.get("content_dim", c.train.dims.content);
    s.get("approx_hidden", c.train.approx_hidden);
    s.get("batch", c.train.batch);
    s.get("lr", c.train.lr);
    s.get("approx_lr", c.train.approx_lr);
    s.get("epochs", c.train.epochs);
    s.get("beta_ramp_epochs", c.train.beta_ramp_epochs);
    s.get("approx_steps", c.train.approx_steps);
    std::string variant(model::variant_name(c.train.variant));
    s.get("variant", variant);
    c.train.variant = variant_from(variant);
    s.get("sweep", c.sweep);
    std::vector<std::string> variants;
    s.get("variants", variants);
    for (const auto& v : variants) c.variants.push_back(variant_from(v));
    s.finish();
  }
  if (const json* j = top.child("eval")) {
    Section s(*j, "eval");
    s.get("classifier_train", c.eval.classifier_train);
    s.get("classifier_test", c.eval.classifier_test);
    s.get("bleu_max_n", c.eval.bleu_max_n);
    s.get("max_references", c.eval.max_references);
    s.get("generation_references", c.eval.generation_references);
    s.get("generate_sources", c.eval.generate_sources);
    s.get("generate_per_source", c.eval.generate_per_source);
    s.get("mmd_bandwidth", c.eval.mmd_bandwidth);
    s.finish();
  }
  if (const json* j = top.child("estimate_mi")) {
    Section s(*j, "estimate_mi");
    s.get("rho", c.mi.rho);
    s.get("batch", c.mi.batch);
    s.get("replicates", c.mi.replicates);
    s.get("approximator", c.mi.approximator);
    s.get("fit_steps", c.mi.fit_steps);
    s.get("hidden", c.mi.hidden);
    s.get("lr", c.mi.lr);
    s.finish();
  }
  top.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string dump_run_config(const RunConfig& c, bool runtime) {
  json variants = json::array();
  for (auto v : c.variants) variants.push_back(std::string(model::variant_name(v)));
  json j = {
      {"seed", c.seed},
      {"out", c.out.string()},
      {"model_path", c.model_path.string()},
      {"jobs", c.jobs},
      {"corpus",
       {{"n_classes", c.corpus.n_classes},
        {"topics", c.corpus.topics},
        {"tokens_per_topic", c.corpus.tokens_per_topic},
        {"style_tokens_per_class", c.corpus.style_tokens_per_class},
        {"length", c.corpus.length},
        {"style_rate", c.corpus.style_rate},
        {"topic_skew", c.corpus.topic_skew},
        {"train_size", c.train_size},
        {"test_size", c.test_size}}},
      {"train",
       {{"embed", c.train.dims.embed},
        {"hidden", c.train.dims.hidden},
        {"style_dim", c.train.dims.style},
        {"content_dim", c.train.dims.content},
        {"approx_hidden", c.train.approx_hidden},
        {"batch", c.train.batch},
        {"lr", c.train.lr},
        {"approx_lr", c.train.approx_lr},
        {"epochs", c.train.epochs},
        {"beta_ramp_epochs", c.train.beta_ramp_epochs},
        {"approx_steps", c.train.approx_steps},
        {"variant", std::string(model::variant_name(c.train.variant))},
        {"sweep", c.sweep},
        {"variants", variants}}},
      {"eval",
       {{"classifier_train", c.eval.classifier_train},
        {"classifier_test", c.eval.classifier_test},
        {"bleu_max_n", c.eval.bleu_max_n},
        {"max_references", c.eval.max_references},
        {"generation_references", c.eval.generation_references},
        {"generate_sources", c.eval.generate_sources},
        {"generate_per_source", c.eval.generate_per_source},
        {"mmd_bandwidth", c.eval.mmd_bandwidth}}},
      {"estimate_mi",
       {{"rho", c.mi.rho},
        {"batch", c.mi.batch},
        {"replicates", c.mi.replicates},
        {"approximator", c.mi.approximator},
        {"fit_steps", c.mi.fit_steps},
        {"hidden", c.mi.hidden},
        {"lr", c.mi.lr}}},
  };
  if (!runtime) {
    for (const char* key : {"out", "model_path", "jobs"}) j.erase(key);
  }
  return j.dump(2) + "\n";
}

}  // namespace idel::cli
