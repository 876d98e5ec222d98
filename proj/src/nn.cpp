// SPDX-License-Identifier: Apache-2.0

#include "ssc/nn.hpp"

namespace ssc::nn {

void init_uniform(Mat& m, Rng& rng, double range) {
  double* data = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    data[i] = rng.uniform(-range, range);
  }
}

void LstmParams::init(int input_dim, int hidden_dim, Rng& rng, double range) {
  hidden = hidden_dim;
  w.resize(4 * hidden_dim, input_dim + hidden_dim);
  b.resize(4 * hidden_dim, 1);
  init_uniform(w, rng, range);
  init_uniform(b, rng, range);
}

LstmVars lease(ad::Tape& tape, const LstmParams& p) {
  return LstmVars{tape.param(p.w), tape.param(p.b)};
}

LstmState lstm_zero_state(ad::Tape& tape, int hidden) {
  return LstmState{tape.constant(Mat::Zero(hidden, 1)),
                   tape.constant(Mat::Zero(hidden, 1))};
}

LstmState lstm_step(ad::Tape& tape, const LstmVars& vars, int hidden,
                    const LstmState& prev, ad::Var input) {
  ad::Var xh = tape.concat_rows({input, prev.h});
  ad::Var z = tape.add(tape.matmul(vars.w, xh), vars.b);
  ad::Var i = tape.sigmoid(tape.slice_rows(z, 0, hidden));
  ad::Var f = tape.sigmoid(tape.slice_rows(z, hidden, hidden));
  ad::Var g = tape.tanh(tape.slice_rows(z, 2 * hidden, hidden));
  ad::Var o = tape.sigmoid(tape.slice_rows(z, 3 * hidden, hidden));
  ad::Var c = tape.add(tape.mul(f, prev.c), tape.mul(i, g));
  ad::Var h = tape.mul(o, tape.tanh(c));
  return LstmState{h, c};
}

void AttentionParams::init(int enc_dim, int query_dim, int att_dim, Rng& rng,
                           double range) {
  enc_proj.resize(att_dim, enc_dim);
  dec_proj.resize(att_dim, query_dim);
  bias.resize(att_dim, 1);
  v.resize(att_dim, 1);
  init_uniform(enc_proj, rng, range);
  init_uniform(dec_proj, rng, range);
  init_uniform(bias, rng, range);
  init_uniform(v, rng, range);
}

AttentionVars lease(ad::Tape& tape, const AttentionParams& p) {
  return AttentionVars{tape.param(p.enc_proj), tape.param(p.dec_proj),
                       tape.param(p.bias), tape.param(p.v)};
}

AttentionResult additive_attention(ad::Tape& tape, const AttentionVars& vars,
                                   ad::Var enc_cols, ad::Var enc_proj_cols,
                                   ad::Var query) {
  ad::Var shift = tape.add(tape.matmul(vars.dec_proj, query), vars.bias);
  ad::Var scores_mat = tape.tanh(tape.add_col_broadcast(enc_proj_cols, shift));
  ad::Var scores = tape.matmul(scores_mat, vars.v, /*transpose_a=*/true);
  ad::Var weights = tape.softmax_col(scores);
  ad::Var context = tape.matmul(enc_cols, weights);
  return AttentionResult{context, weights};
}

void accumulate_grad(ad::Var leaf, Mat& sink) {
  if (leaf.has_grad()) {
    sink += leaf.grad();
  }
}

}  // namespace ssc::nn
