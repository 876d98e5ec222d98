// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssc/types.hpp"
#include "ssc/vocabulary.hpp"

namespace ssc {

struct Utterance {
  std::string id;
  int speaker_id = 0;
  FeatureSequence features;
  // Present iff the utterance belongs to a labeled split.
  std::optional<TokenSequence> transcript;
};

struct CorpusSplit {
  std::vector<Utterance> labeled;
  std::vector<Utterance> unlabeled;
  std::vector<Utterance> dev;
  std::vector<Utterance> test;
  std::uint64_t seed = 0;
  int feature_dim = 0;
};

// Generation parameters for the synthetic speech-like corpus. Each utterance
// is a concatenation of per-token spectral prototype segments (one fixed
// random prototype per vocabulary token, smooth in time), scaled elementwise
// by a per-speaker smooth spectral gain curve, plus i.i.d. Gaussian noise.
struct CorpusSpec {
  int speakers = 4;
  int labeled = 1000;
  int unlabeled = 1000;
  int dev = 250;
  int test = 250;
  int feature_dim = 20;
  double noise_sigma = 0.1;
  // Transcripts are random words over this sub-alphabet.
  std::string alphabet = "abcdefgh";
  int words_min = 1;
  int words_max = 2;
  int word_len_min = 2;
  int word_len_max = 4;
  int frames_per_token_min = 2;
  int frames_per_token_max = 4;

  void validate() const;  // throws std::invalid_argument on infeasible specs
};

// Pure function of (spec, seed): regeneration is bit-identical. Every
// utterance draws from its own derived RNG stream, so generation order does
// not matter. Frame counts per token depend only on (seed, transcript
// position, token), which makes two sigma=0 utterances with the same
// transcript and speaker bit-identical.
CorpusSplit generate_corpus(const CorpusSpec& spec, std::uint64_t seed);

// Statistics-pooling speaker embedder: per-bin mean and standard deviation
// over frames (2F values) projected by a fixed seeded random matrix and
// normalized to unit Euclidean norm. Deterministic; frame order invariant.
SpeakerEmbedding extract_speaker_embedding(const FeatureSequence& features,
                                           int embedding_dim = 16);

// On-disk corpus layout: <dir>/manifest.tsv with tab-separated columns
//   id  speaker  split  text
// (text empty for unlabeled utterances) and one feature matrix file per
// utterance at <dir>/feats/<id>.fmat.
void save_corpus(const CorpusSplit& corpus, const std::string& dir);
CorpusSplit load_corpus(const std::string& dir);

}  // namespace ssc
