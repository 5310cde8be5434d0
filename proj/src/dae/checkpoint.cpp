#include "assist/dae/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace assist::dae {
namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size())) throw std::runtime_error("checkpoint: truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams& p) {
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_le<std::uint32_t>(out, kCheckpointVersion);
  for (int d : {p.dims.input, p.dims.integration, p.dims.hidden, p.dims.output_hidden, p.dims.window})
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  for (double v : p.flatten()) put_le<double>(out, v);
  if (!out) throw std::runtime_error("checkpoint: write failed");
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& p) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string());
  write_checkpoint(out, p);
}

ModelParams read_checkpoint(std::istream& in, const std::optional<ModelDims>& expected) {
  char magic[sizeof(kCheckpointMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  if (get_le<std::uint32_t>(in) != kCheckpointVersion) throw std::runtime_error("checkpoint: unsupported version");
  ModelDims dims;
  for (int* d : {&dims.input, &dims.integration, &dims.hidden, &dims.output_hidden, &dims.window}) {
    const auto v = get_le<std::uint32_t>(in);
    if (v == 0 || v > (1u << 20)) throw std::runtime_error("checkpoint: implausible dimension");
    *d = static_cast<int>(v);
  }
  if (expected && !(dims == *expected)) throw std::runtime_error("checkpoint: dimensions do not match the model");
  ModelParams p = ModelParams::zeros(dims);
  std::vector<double> flat(p.parameter_count());
  for (double& v : flat) v = get_le<double>(in);
  p.assign(flat);
  return p;
}

ModelParams load_checkpoint(const std::filesystem::path& path, const std::optional<ModelDims>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  return read_checkpoint(in, expected);
}

}  // namespace assist::dae
