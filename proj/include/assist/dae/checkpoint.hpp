#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "assist/dae/params.hpp"

namespace assist::dae {

// Binary layout: 8-byte magic "ADAECKPT", uint32 version, uint32 dims
// (input, integration, hidden, output_hidden, window), then every parameter
// as a little-endian double in ModelParams::flatten() order.
inline constexpr char kCheckpointMagic[8] = {'A', 'D', 'A', 'E', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const ModelParams& params);
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);

// Throws std::runtime_error on a bad header, truncated payload, or when the
// stored dims differ from `expected` (if given).
ModelParams read_checkpoint(std::istream& in, const std::optional<ModelDims>& expected = std::nullopt);
ModelParams load_checkpoint(const std::filesystem::path& path, const std::optional<ModelDims>& expected = std::nullopt);

}  // namespace assist::dae
