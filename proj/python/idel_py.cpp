// SPDX-License-Identifier: Apache-2.0
// Python bindings: estimators, divergences, metrics, corpus, model I/O and
// the command runner. Embeddings cross as float64 numpy arrays [rows, dim].
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "idel/cli/commands.hpp"
#include "idel/cli/config.hpp"
#include "idel/cli/metrics.hpp"
#include "idel/divergences/divergences.hpp"
#include "idel/errors.hpp"
#include "idel/infotheory/discrete.hpp"
#include "idel/infotheory/gaussian.hpp"
#include "idel/mibounds/estimators.hpp"
#include "idel/model/generation.hpp"
#include "idel/model/serialize.hpp"

namespace py = pybind11;
using namespace idel;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

num::Tensor to_tensor(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0)), cols = static_cast<std::size_t>(a.shape(1));
  return num::Tensor({rows, cols}, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array to_array(const num::Tensor& t) {
  Array out({t.rows(), t.cols()});
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

EmbeddingBatch batch_of(const Array& s, const Array& c) {
  EmbeddingBatch b{to_tensor(s), to_tensor(c)};
  b.validate();
  return b;
}

div::SampleGroup group_of(const Array& a, int label) {
  const auto t = to_tensor(a);
  return div::SampleGroup(t.cols(), std::vector<double>(t.data().begin(), t.data().end()), label);
}

info::JointDiscrete joint_of(const Array& table) {
  const auto t = to_tensor(table);
  return info::JointDiscrete(t.rows(), t.cols(), std::vector<double>(t.data().begin(), t.data().end()));
}

std::vector<model::LabeledSequence> sequences_of(const std::vector<std::vector<std::uint32_t>>& tokens) {
  std::vector<model::LabeledSequence> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back({t, 0, -1});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "IDEL: disentangled text representations via mutual-information bounds";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

  // information theory
  m.def("gaussian_mi", [](std::vector<double> rho) { return info::gaussian_mi({std::move(rho)}); }, py::arg("rho"));
  m.def("mutual_information", [](const Array& t) { return info::mutual_information(joint_of(t)); },
        py::arg("table"));
  m.def("variation_of_information", [](const Array& t) { return info::variation_of_information(joint_of(t)); },
        py::arg("table"));
  m.def(
      "sample_gaussian_pairs",
      [](std::vector<double> rho, std::size_t n, std::uint64_t seed) {
        num::Rng rng(seed, "python-pairs");
        const auto b = info::sample_gaussian_pairs({std::move(rho)}, n, rng);
        return py::make_tuple(to_array(b.s), to_array(b.c));
      },
      py::arg("rho"), py::arg("n"), py::arg("seed") = 0, "(s, c) draws from the correlated Gaussian pair");

  // MI bounds with the analytic conditional of the Gaussian pair
  m.def(
      "club_full",
      [](const Array& s, const Array& c, std::vector<double> rho) {
        const auto q = mi::AffineGaussianConditional::from_pair_spec({std::move(rho)});
        return mi::club_full(batch_of(s, c), q).item();
      },
      py::arg("s"), py::arg("c"), py::arg("rho"));
  m.def(
      "club_stochastic",
      [](const Array& s, const Array& c, std::vector<double> rho, std::uint64_t seed) {
        const auto q = mi::AffineGaussianConditional::from_pair_spec({std::move(rho)});
        return mi::club_stochastic(batch_of(s, c), q, seed).item();
      },
      py::arg("s"), py::arg("c"), py::arg("rho"), py::arg("seed") = 0);
  m.def(
      "ba_lower_bound",
      [](const Array& s, const Array& c, std::vector<double> rho) {
        const std::size_t d = rho.size();
        const auto q = mi::AffineGaussianConditional::from_pair_spec({std::move(rho)});
        return mi::ba_lower_bound(batch_of(s, c), q, info::standard_normal_entropy(d));
      },
      py::arg("s"), py::arg("c"), py::arg("rho"));

  // two-sample divergences
  auto metric = [](const std::string& name) { return div::GroundMetric{div::parse_metric(name)}; };
  m.def("mad", [=](const Array& a, const Array& b, const std::string& d) {
    return div::mad(group_of(a, 0), group_of(b, 1), metric(d));
  }, py::arg("a"), py::arg("b"), py::arg("metric") = "cosine");
  m.def("energy_distance", [=](const Array& a, const Array& b, const std::string& d) {
    return div::energy_distance(group_of(a, 0), group_of(b, 1), metric(d));
  }, py::arg("a"), py::arg("b"), py::arg("metric") = "cosine");
  m.def("wasserstein", [=](const Array& a, const Array& b, const std::string& d) {
    return div::wasserstein(group_of(a, 0), group_of(b, 1), metric(d));
  }, py::arg("a"), py::arg("b"), py::arg("metric") = "cosine");
  m.def("mmd", [](const Array& a, const Array& b, double w) { return div::mmd(group_of(a, 0), group_of(b, 1), w); },
        py::arg("a"), py::arg("b"), py::arg("bandwidth") = 1.0);

  // evaluation metrics
  m.def(
      "corpus_bleu",
      [](const std::vector<cli::Sentence>& h, const std::vector<cli::Sentence>& r, std::size_t n) {
        return cli::corpus_bleu(std::span<const cli::Sentence>(h), std::span<const cli::Sentence>(r), n);
      },
      py::arg("hypotheses"), py::arg("references"), py::arg("max_n") = 4);
  m.def(
      "corpus_bleu_multi",
      [](const std::vector<cli::Sentence>& h, const std::vector<std::vector<cli::Sentence>>& r, std::size_t n) {
        return cli::corpus_bleu(std::span<const cli::Sentence>(h), std::span<const std::vector<cli::Sentence>>(r), n);
      },
      py::arg("hypotheses"), py::arg("references"), py::arg("max_n") = 4);
  m.def(
      "self_bleu",
      [](const std::vector<cli::Sentence>& o, const std::vector<cli::Sentence>& t, std::size_t n) {
        return cli::self_bleu(o, t, n);
      },
      py::arg("originals"), py::arg("transferred"), py::arg("max_n") = 4);
  m.def("geometric_mean", [](const std::vector<double>& v) { return cli::geometric_mean(v); }, py::arg("values"));

  // corpus and model
  m.def(
      "make_corpus",
      [](std::size_t n, std::uint64_t seed, std::size_t n_classes, double style_rate, double topic_skew) {
        model::CorpusSpec spec;
        spec.n_classes = n_classes;
        spec.style_rate = style_rate;
        spec.topic_skew = topic_skew;
        py::list out;
        for (const auto& x : model::make_corpus(spec, n, seed)) out.append(py::make_tuple(x.tokens, x.label, x.topic));
        return out;
      },
      py::arg("n"), py::arg("seed") = 0, py::arg("n_classes") = 2, py::arg("style_rate") = 0.25,
      py::arg("topic_skew") = 0.5, "List of (tokens, label, topic) from the default corpus spec");

  py::class_<model::TrainedModel>(m, "Model")
      .def_static("load", py::overload_cast<const std::filesystem::path&>(&model::load_model), py::arg("path"))
      .def("save", py::overload_cast<const model::TrainedModel&, const std::filesystem::path&>(&model::save_model),
           py::arg("path"))
      .def_property_readonly("trained", [](const model::TrainedModel& t) { return t.trained; })
      .def_property_readonly("variant",
                             [](const model::TrainedModel& t) { return std::string(model::variant_name(t.config.variant)); })
      .def(
          "encode",
          [](const model::TrainedModel& t, const std::vector<std::vector<std::uint32_t>>& tokens) {
            const auto seqs = sequences_of(tokens);
            const auto e = model::encode_mean(t.encoder, seqs);
            return py::make_tuple(to_array(e.sample.s), to_array(e.sample.c));
          },
          py::arg("sentences"), "Zero-noise (s, c) embeddings")
      .def(
          "transfer",
          [](const model::TrainedModel& t, const std::vector<std::vector<std::uint32_t>>& contents,
             const std::vector<std::vector<std::uint32_t>>& styles) {
            return model::transfer_batch(t, sequences_of(contents), sequences_of(styles));
          },
          py::arg("contents"), py::arg("styles"));

  // command runner
  m.def(
      "run_command",
      [](const std::string& command, const std::string& config_json) {
        const auto config = cli::parse_run_config(config_json);
        std::ostringstream out;
        const int code = cli::run_command(command, config, out);
        return py::make_tuple(code, out.str());
      },
      py::arg("command"), py::arg("config_json") = "{}", "(exit code, stdout text) of one idel subcommand");
}
