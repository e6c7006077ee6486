// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "idel/model/trainer.hpp"

namespace idel::model {

inline constexpr char kModelMagic[4] = {'I', 'D', 'E', 'L'};
inline constexpr std::uint16_t kModelVersion = 1;

/// Layout, all little-endian: magic, u16 version, config block (u64 fields
/// then f64 learning rates, u8 variant, u8 trained flag), then for each
/// parameter in encoder, classifier, decoder, generator, approximator order:
/// u32 rank, u64 dims, f64 values.
void save_model(const TrainedModel& model, std::ostream& out);
void save_model(const TrainedModel& model, const std::filesystem::path& path);

/// Throws ContractError on a bad magic, version, shape or truncated stream.
TrainedModel load_model(std::istream& in);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace idel::model
