// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ssc {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// S x F matrix of log-spectral frames, one row per frame. Values are kept on
// the float32 grid by construction so that the on-disk format (float32) round
// trips bit-identically.
struct FeatureSequence {
  Mat frames;

  FeatureSequence() = default;
  explicit FeatureSequence(Mat m) : frames(std::move(m)) {}

  int num_frames() const { return static_cast<int>(frames.rows()); }
  int num_bins() const { return static_cast<int>(frames.cols()); }
};

// Sequence of vocabulary ids.
using TokenSequence = std::vector<int>;

// Unit-norm speaker vector, a deterministic function of the input features.
struct SpeakerEmbedding {
  Vec vector;

  int dim() const { return static_cast<int>(vector.size()); }
};

// Rounds every entry to the nearest float32. Generation and reconstruction
// pass their outputs through this so cached and recomputed features compare
// bit-for-bit.
inline Mat quantize_to_float32(const Mat& m) {
  return m.unaryExpr([](double v) { return static_cast<double>(static_cast<float>(v)); });
}

}  // namespace ssc
