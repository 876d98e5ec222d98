// SPDX-License-Identifier: Apache-2.0

#include "ssc/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>

namespace ssc {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint files are little-endian");

constexpr char kMagic[4] = {'S', 'S', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_name(std::ostream& out, const std::string& name) {
  if (name.size() > 0xffff) {
    throw std::invalid_argument("checkpoint section name too long");
  }
  write_pod<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
}

std::string read_name(std::istream& in) {
  auto len = read_pod<std::uint16_t>(in);
  std::string name(len, '\0');
  in.read(name.data(), len);
  return name;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open checkpoint for writing: " + path);
  }
  out.write(kMagic, 4);
  write_pod<std::uint32_t>(out, kVersion);
  write_name(out, ckpt.kind);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.config.size()));
  for (const auto& [key, value] : ckpt.config) {
    write_name(out, key);
    write_pod<std::int64_t>(out, value);
  }
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, m] : ckpt.tensors) {
    write_name(out, name);
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(m.rows()));
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        write_pod<float>(out, static_cast<float>(m(r, c)));
      }
    }
  }
  if (!out) {
    throw std::runtime_error("checkpoint write failed: " + path);
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open checkpoint: " + path);
  }
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != std::string(kMagic, 4)) {
    throw std::runtime_error("not a checkpoint file: " + path);
  }
  auto version = read_pod<std::uint32_t>(in);
  if (version != kVersion) {
    throw std::runtime_error("unsupported checkpoint version in " + path);
  }
  Checkpoint ckpt;
  ckpt.kind = read_name(in);
  auto n_config = read_pod<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_config; ++i) {
    std::string key = read_name(in);
    ckpt.config[key] = read_pod<std::int64_t>(in);
  }
  auto n_tensors = read_pod<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    std::string name = read_name(in);
    auto rows = read_pod<std::uint32_t>(in);
    auto cols = read_pod<std::uint32_t>(in);
    Mat m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) {
        m(r, c) = static_cast<double>(read_pod<float>(in));
      }
    }
    ckpt.tensors.emplace_back(std::move(name), std::move(m));
  }
  if (!in) {
    throw std::runtime_error("truncated checkpoint: " + path);
  }
  return ckpt;
}

}  // namespace ssc
