// SPDX-License-Identifier: Apache-2.0

#include "ssc/matio.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace ssc {

namespace {

// All supported targets are little-endian; static-assert the assumption the
// format relies on instead of byte-swapping.
static_assert(std::endian::native == std::endian::little,
              "feature matrix files are little-endian");

void write_i32(std::ostream& out, std::int32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::int32_t read_i32(std::istream& in) {
  std::int32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void write_feature_matrix(const std::string& path, const Mat& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  write_i32(out, static_cast<std::int32_t>(m.rows()));
  write_i32(out, static_cast<std::int32_t>(m.cols()));
  std::vector<float> row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = static_cast<float>(m(r, c));
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

Mat read_feature_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::int32_t rows = read_i32(in);
  std::int32_t cols = read_i32(in);
  if (!in || rows < 0 || cols < 0) {
    throw std::runtime_error("corrupt feature matrix header: " + path);
  }
  Mat m(rows, cols);
  std::vector<float> row(static_cast<std::size_t>(cols));
  for (std::int32_t r = 0; r < rows; ++r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) {
      throw std::runtime_error("truncated feature matrix: " + path);
    }
    for (std::int32_t c = 0; c < cols; ++c) {
      m(r, c) = static_cast<double>(row[static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

}  // namespace ssc
