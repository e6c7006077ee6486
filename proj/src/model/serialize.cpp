// SPDX-License-Identifier: Apache-2.0
#include "idel/model/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "idel/errors.hpp"

namespace idel::model {

static_assert(std::endian::native == std::endian::little, "model files are written in host byte order");

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ContractError("model file: truncated");
  return v;
}

std::vector<num::Tensor> all_params(const TrainedModel& m) {
  auto p = m.main_params();
  const auto a = m.approximator_params();
  p.insert(p.end(), a.begin(), a.end());
  return p;
}

}  // namespace

void save_model(const TrainedModel& model, std::ostream& out) {
  const auto& c = model.config;
  out.write(kModelMagic, sizeof kModelMagic);
  put<std::uint16_t>(out, kModelVersion);
  for (std::uint64_t v : {c.dims.vocab, c.dims.embed, c.dims.hidden, c.dims.style, c.dims.content, c.n_classes,
                          c.approx_hidden, c.batch, c.epochs, c.beta_ramp_epochs, c.approx_steps}) {
    put(out, v);
  }
  put<std::uint64_t>(out, c.seed);
  put(out, c.lr);
  put(out, c.approx_lr);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(c.variant));
  put<std::uint8_t>(out, model.trained ? 1 : 0);
  for (const auto& t : all_params(model)) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.shape()) put<std::uint64_t>(out, d);
    out.write(reinterpret_cast<const char*>(t.data().data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!out) throw ContractError("model file: write failed");
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("model file: cannot open " + path.string() + " for writing");
  save_model(model, out);
}

TrainedModel load_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kModelMagic, sizeof magic) != 0) {
    throw ContractError("model file: bad magic");
  }
  if (const auto version = get<std::uint16_t>(in); version != kModelVersion) {
    throw ContractError("model file: unsupported version " + std::to_string(version));
  }
  TrainConfig c;
  for (std::size_t* f : {&c.dims.vocab, &c.dims.embed, &c.dims.hidden, &c.dims.style, &c.dims.content, &c.n_classes,
                         &c.approx_hidden, &c.batch, &c.epochs, &c.beta_ramp_epochs, &c.approx_steps}) {
    *f = static_cast<std::size_t>(get<std::uint64_t>(in));
  }
  c.seed = get<std::uint64_t>(in);
  c.lr = get<double>(in);
  c.approx_lr = get<double>(in);
  const auto variant = get<std::uint8_t>(in);
  if (variant > static_cast<std::uint8_t>(Variant::kFullNonStochastic)) throw ContractError("model file: bad variant");
  c.variant = static_cast<Variant>(variant);
  const bool trained = get<std::uint8_t>(in) != 0;

  TrainedModel model = TrainedModel::initialize(c);
  for (auto& t : all_params(model)) {
    const auto rank = get<std::uint32_t>(in);
    num::Shape shape(rank);
    for (auto& d : shape) d = static_cast<std::size_t>(get<std::uint64_t>(in));
    if (shape != t.shape()) {
      throw ContractError("model file: parameter shape " + num::shape_string(shape) + " does not match config " +
                          num::shape_string(t.shape()));
    }
    auto dst = t.mutable_data();
    if (!in.read(reinterpret_cast<char*>(dst.data()), static_cast<std::streamsize>(dst.size() * sizeof(double)))) {
      throw ContractError("model file: truncated");
    }
  }
  model.trained = trained;
  return model;
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("model file: cannot open " + path.string());
  return load_model(in);
}

}  // namespace idel::model
