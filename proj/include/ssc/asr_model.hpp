// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssc/autodiff.hpp"
#include "ssc/nn.hpp"
#include "ssc/types.hpp"
#include "ssc/vocabulary.hpp"

namespace ssc {

struct AsrConfig {
  int encoder_layers = 2;   // bidirectional LSTM layers
  int encoder_hidden = 64;  // per direction
  int subsample_factor = 4;
  int decoder_hidden = 128;
  int embed_dim = 32;
  int attention_dim = 64;
  int vocab_size = Vocabulary::kSize;
  int feature_dim = 20;

  void validate() const;
};

enum class AsrRole { kBase, kTeacher, kStudent };

// Encoder outputs h^e, one row per subsampled frame (S' x 2H).
struct EncoderStates {
  Mat states;

  int length() const { return static_cast<int>(states.rows()); }
};

struct Hypothesis {
  TokenSequence ids;
  double log_prob = 0.0;
};

// Attention-based encoder-decoder ASR model. The encoder is a stack of
// bidirectional LSTMs; the last two layers each drop every second output
// frame (even indices kept) after the recurrent pass, reducing the length by
// a factor of four with S' = ceil(ceil(S/2)/2). The decoder is a single
// unidirectional LSTM with additive attention; each step consumes the
// previous token embedding concatenated with the previous attention context.
//
// Forward passes are read-only on the parameters and safe to run
// concurrently; gradient accumulation mutates the model and needs exclusive
// access.
class AsrModel {
 public:
  AsrModel() = default;
  // Parameters drawn uniform in [-0.1, 0.1] from a seeded stream, filled in
  // declaration order.
  AsrModel(const AsrConfig& config, std::uint64_t seed);

  const AsrConfig& config() const { return config_; }
  AsrRole role() const { return role_; }
  void set_role(AsrRole role) { role_ = role; }

  AsrModel clone(AsrRole role) const;

  // Parameter tensors in declaration order (the checkpoint order).
  std::vector<nn::ParamRef> params();
  void zero_grads();

  void save(const std::string& path) const;
  static AsrModel load(const std::string& path);

  // Number of scalar parameters; a pure function of the config.
  std::int64_t parameter_count() const;

  struct Params {
    std::vector<nn::LstmParams> enc_fwd;
    std::vector<nn::LstmParams> enc_bwd;
    Mat embed;  // V x E
    nn::LstmParams dec;
    nn::AttentionParams att;
    Mat out_w;  // V x (D + 2H)
    Mat out_b;  // V x 1
  };
  const Params& weights() const { return p_; }

 private:
  friend class AsrGraph;

  AsrConfig config_;
  AsrRole role_ = AsrRole::kBase;
  Params p_;
  Params g_;  // gradient accumulators, same shapes
};

// Per-tape lease of the model parameters plus graph builders. One AsrGraph
// serves one utterance (or one decoding session) on one tape.
class AsrGraph {
 public:
  AsrGraph(ad::Tape& tape, const AsrModel& model);

  struct Encoded {
    ad::Var enc_cols;       // 2H x S'
    ad::Var enc_proj_cols;  // A x S', precomputed attention projection
    int length = 0;
  };

  struct State {
    nn::LstmState lstm;
    ad::Var context;  // 2H x 1
  };

  struct StepResult {
    ad::Var log_probs;    // V x 1
    ad::Var att_weights;  // S' x 1
    State state;
  };

  // Builds the encoder graph over raw frames (gradients flow into the
  // encoder parameters).
  Encoded encode(const FeatureSequence& features);
  // Injects precomputed encoder states as constants (inference from values).
  Encoded inject(const EncoderStates& states);

  State initial_state(const Encoded& enc);
  // Feeds `token` (the previously emitted token; sos/eos to start) and
  // returns the distribution over the next token.
  StepResult step(const Encoded& enc, const State& prev, int token);

  // Adds tape gradients into the model's accumulators; call after backward.
  void accumulate_grads(AsrModel& model) const;

 private:
  ad::Tape& tape_;
  const AsrModel& model_;
  std::vector<nn::LstmVars> enc_fwd_;
  std::vector<nn::LstmVars> enc_bwd_;
  ad::Var embed_;
  nn::LstmVars dec_;
  nn::AttentionVars att_;
  ad::Var out_w_;
  ad::Var out_b_;
};

// ---- Spec-level operations ----

EncoderStates encode(const AsrModel& model, const FeatureSequence& features);

// Probability vector over the vocabulary given a prefix that starts with
// sos/eos. Throws std::invalid_argument on an empty or malformed prefix.
Vec decode_step(const AsrModel& model, const EncoderStates& enc,
                const TokenSequence& prefix);

// log P(tokens | features) under teacher forcing; `tokens` must end with
// sos/eos.
double sequence_log_prob(const AsrModel& model, const FeatureSequence& features,
                         const TokenSequence& tokens);

struct LabeledExample {
  const FeatureSequence* features;
  const TokenSequence* transcript;  // without trailing sos/eos
};

// Mean over the batch of -(1/T) sum_t log p(y_t | y_{1:t-1}, x); the sos/eos
// terminator is appended to each transcript internally, so T = |y| + 1.
// Gradients are accumulated into the model (callers zero_grads() first).
// Throws std::invalid_argument on an empty batch.
double supervised_loss(AsrModel& model, const std::vector<LabeledExample>& batch);

Hypothesis greedy_decode_hypothesis(const AsrModel& model,
                                    const FeatureSequence& features, int max_len);
TokenSequence greedy_decode(const AsrModel& model, const FeatureSequence& features,
                            int max_len);

// Length-unnormalized beam search. All expansions compete for the top
// `beam` slots; expansions ending in sos/eos leave the beam as finished
// hypotheses, and hypotheses still alive at max_len are finished as-is.
// Ties break by (higher log_prob, then lexicographically smaller ids).
Hypothesis beam_decode_hypothesis(const AsrModel& model,
                                  const FeatureSequence& features, int beam,
                                  int max_len);
TokenSequence beam_decode(const AsrModel& model, const FeatureSequence& features,
                          int beam, int max_len);

// Default decode length bound: 2 * S' + 10.
int default_max_len(int encoded_length);

}  // namespace ssc
