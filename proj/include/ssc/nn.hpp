// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ssc/autodiff.hpp"
#include "ssc/rng.hpp"
#include "ssc/types.hpp"

namespace ssc::nn {

// Named view onto one parameter tensor and its gradient accumulator. Models
// expose their tensors in declaration order; the order is part of the
// checkpoint format.
struct ParamRef {
  std::string name;
  Mat* value;
  Mat* grad;
};

// Fills in column-major storage order with uniform(-range, range) draws.
void init_uniform(Mat& m, Rng& rng, double range);

// Single LSTM cell. Gate order in the stacked weight is [input; forget;
// cell; output], combined over the concatenated (input, hidden) vector:
//   z = W [x; h] + b
//   i = sigmoid(z_0)   f = sigmoid(z_1)   g = tanh(z_2)   o = sigmoid(z_3)
//   c' = f * c + i * g
//   h' = o * tanh(c')
struct LstmParams {
  Mat w;  // 4H x (input_dim + H)
  Mat b;  // 4H x 1
  int hidden = 0;

  void init(int input_dim, int hidden_dim, Rng& rng, double range);
};

struct LstmVars {
  ad::Var w;
  ad::Var b;
};

struct LstmState {
  ad::Var h;
  ad::Var c;
};

LstmVars lease(ad::Tape& tape, const LstmParams& p);
LstmState lstm_zero_state(ad::Tape& tape, int hidden);
LstmState lstm_step(ad::Tape& tape, const LstmVars& vars, int hidden,
                    const LstmState& prev, ad::Var input);

// Additive attention: score_s = v^T tanh(P_s + W_d q + bias) where P is the
// precomputed projection of the encoder columns, alpha = softmax(score), and
// the context is the alpha-weighted sum of encoder columns.
struct AttentionParams {
  Mat enc_proj;  // A x C
  Mat dec_proj;  // A x D
  Mat bias;      // A x 1
  Mat v;         // A x 1

  void init(int enc_dim, int query_dim, int att_dim, Rng& rng, double range);
};

struct AttentionVars {
  ad::Var enc_proj;
  ad::Var dec_proj;
  ad::Var bias;
  ad::Var v;
};

AttentionVars lease(ad::Tape& tape, const AttentionParams& p);

struct AttentionResult {
  ad::Var context;  // C x 1
  ad::Var weights;  // S' x 1, sums to 1
};

// enc_cols is C x S'; enc_proj_cols is the precomputed (A x S') projection
// matmul(vars.enc_proj, enc_cols) shared across decoder steps.
AttentionResult additive_attention(ad::Tape& tape, const AttentionVars& vars,
                                   ad::Var enc_cols, ad::Var enc_proj_cols,
                                   ad::Var query);

// Adds tape gradients (if any reached the leaf) into the model-side
// accumulators. Pairs must match the lease order.
void accumulate_grad(ad::Var leaf, Mat& sink);

}  // namespace ssc::nn
