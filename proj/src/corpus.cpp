// SPDX-License-Identifier: Apache-2.0

#include "ssc/corpus.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "ssc/matio.hpp"
#include "ssc/rng.hpp"

namespace ssc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Stream tags for Rng::derive.
enum : std::uint64_t {
  kStreamUtterance = 1,
  kStreamPrototype = 2,
  kStreamSpeakerGain = 3,
  kStreamDuration = 4,
};

struct TokenPrototype {
  Vec base;
  Vec sweep;
  Vec curve;
};

TokenPrototype make_prototype(std::uint64_t seed, int token_id, int feature_dim) {
  Rng rng = Rng::derive(seed, kStreamPrototype, static_cast<std::uint64_t>(token_id));
  TokenPrototype p;
  p.base.resize(feature_dim);
  p.sweep.resize(feature_dim);
  p.curve.resize(feature_dim);
  for (int f = 0; f < feature_dim; ++f) p.base[f] = rng.uniform(-1.0, 1.0);
  for (int f = 0; f < feature_dim; ++f) p.sweep[f] = rng.uniform(-1.0, 1.0);
  for (int f = 0; f < feature_dim; ++f) p.curve[f] = rng.uniform(-1.0, 1.0);
  return p;
}

// Prototype sampled at relative position u in [0, 1]: a slow linear sweep
// plus a half-period arch, both fixed per token.
Vec prototype_at(const TokenPrototype& p, double u) {
  return p.base + 0.6 * (2.0 * u - 1.0) * p.sweep + 0.4 * std::sin(kPi * u) * p.curve;
}

// Smooth positive per-speaker spectral gain over the frequency axis.
Vec speaker_gain(std::uint64_t seed, int speaker_id, int feature_dim) {
  Rng rng = Rng::derive(seed, kStreamSpeakerGain, static_cast<std::uint64_t>(speaker_id));
  double omega1 = rng.uniform(1.0, 4.0);
  double phase1 = rng.uniform(0.0, 2.0 * kPi);
  double omega2 = rng.uniform(1.0, 4.0);
  double phase2 = rng.uniform(0.0, 2.0 * kPi);
  Vec gain(feature_dim);
  for (int f = 0; f < feature_dim; ++f) {
    double x = static_cast<double>(f) / static_cast<double>(feature_dim);
    gain[f] = std::exp(0.4 * std::sin(2.0 * kPi * omega1 * x + phase1) +
                       0.3 * std::sin(2.0 * kPi * omega2 * x + phase2));
  }
  return gain;
}

// Frames for the token at transcript position `pos`: a pure function of
// (seed, token, pos) so identical transcripts render to identical lengths.
int frames_for_token(std::uint64_t seed, const CorpusSpec& spec, int token_id, int pos) {
  Rng rng = Rng::derive(seed, kStreamDuration + static_cast<std::uint64_t>(token_id),
                        static_cast<std::uint64_t>(pos));
  return static_cast<int>(rng.uniform_range(spec.frames_per_token_min,
                                            spec.frames_per_token_max));
}

std::string random_transcript(const CorpusSpec& spec, Rng& rng) {
  int n_words = static_cast<int>(rng.uniform_range(spec.words_min, spec.words_max));
  std::string text;
  for (int w = 0; w < n_words; ++w) {
    if (w > 0) {
      text += ' ';
    }
    int len = static_cast<int>(rng.uniform_range(spec.word_len_min, spec.word_len_max));
    for (int i = 0; i < len; ++i) {
      text += spec.alphabet[rng.uniform_int(spec.alphabet.size())];
    }
  }
  return text;
}

Utterance synthesize(const CorpusSpec& spec, std::uint64_t seed,
                     const Vocabulary& vocab,
                     const std::vector<TokenPrototype>& prototypes,
                     const std::vector<Vec>& gains, int global_index,
                     const std::string& split_name, bool keep_transcript) {
  Rng rng = Rng::derive(seed, kStreamUtterance, static_cast<std::uint64_t>(global_index));
  Utterance utt;
  {
    std::ostringstream id;
    id << "utt" << std::setw(6) << std::setfill('0') << global_index;
    utt.id = id.str();
  }
  (void)split_name;
  utt.speaker_id = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(spec.speakers)));
  std::string text = random_transcript(spec, rng);
  TokenSequence tokens = tokenize(text, vocab);

  std::vector<int> durations(tokens.size());
  int total_frames = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    durations[i] = frames_for_token(seed, spec, tokens[i], static_cast<int>(i));
    total_frames += durations[i];
  }

  const Vec& gain = gains[static_cast<std::size_t>(utt.speaker_id)];
  Mat frames(total_frames, spec.feature_dim);
  int row = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const TokenPrototype& proto = prototypes[static_cast<std::size_t>(tokens[i])];
    int k = durations[i];
    for (int j = 0; j < k; ++j) {
      double u = (j + 0.5) / static_cast<double>(k);
      Vec v = prototype_at(proto, u).cwiseProduct(gain);
      if (spec.noise_sigma > 0.0) {
        for (int f = 0; f < spec.feature_dim; ++f) {
          v[f] += spec.noise_sigma * rng.gaussian();
        }
      }
      frames.row(row++) = v.transpose();
    }
  }
  utt.features = FeatureSequence(quantize_to_float32(frames));
  if (keep_transcript) {
    utt.transcript = tokens;
  }
  return utt;
}

}  // namespace

void CorpusSpec::validate() const {
  if (speakers < 1) {
    throw std::invalid_argument("corpus spec: speakers must be >= 1");
  }
  if (feature_dim < 1) {
    throw std::invalid_argument("corpus spec: feature_dim must be >= 1");
  }
  if (labeled < 1) {
    throw std::invalid_argument("corpus spec: labeled count must be >= 1");
  }
  if (unlabeled < 0 || dev < 0 || test < 0) {
    throw std::invalid_argument("corpus spec: split sizes must be non-negative");
  }
  if (noise_sigma < 0.0) {
    throw std::invalid_argument("corpus spec: noise_sigma must be >= 0");
  }
  if (alphabet.empty()) {
    throw std::invalid_argument("corpus spec: alphabet must be non-empty");
  }
  Vocabulary vocab;
  for (char c : alphabet) {
    int id = vocab.id_of(c);
    if (id < Vocabulary::kApostrophe) {
      throw std::invalid_argument(std::string("corpus spec: alphabet character '") + c +
                                  "' must be a letter or apostrophe");
    }
  }
  if (words_min < 1 || words_max < words_min) {
    throw std::invalid_argument("corpus spec: invalid words range");
  }
  if (word_len_min < 1 || word_len_max < word_len_min) {
    throw std::invalid_argument("corpus spec: invalid word length range");
  }
  if (frames_per_token_min < 1 || frames_per_token_max < frames_per_token_min) {
    throw std::invalid_argument("corpus spec: invalid frames-per-token range");
  }
}

CorpusSplit generate_corpus(const CorpusSpec& spec, std::uint64_t seed) {
  spec.validate();
  Vocabulary vocab;
  std::vector<TokenPrototype> prototypes;
  prototypes.reserve(Vocabulary::kSize);
  for (int t = 0; t < Vocabulary::kSize; ++t) {
    prototypes.push_back(make_prototype(seed, t, spec.feature_dim));
  }
  std::vector<Vec> gains;
  gains.reserve(static_cast<std::size_t>(spec.speakers));
  for (int s = 0; s < spec.speakers; ++s) {
    gains.push_back(speaker_gain(seed, s, spec.feature_dim));
  }

  CorpusSplit corpus;
  corpus.seed = seed;
  corpus.feature_dim = spec.feature_dim;
  int index = 0;
  auto fill = [&](std::vector<Utterance>& out, int count, const char* split,
                  bool keep_transcript) {
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      out.push_back(synthesize(spec, seed, vocab, prototypes, gains, index++, split,
                               keep_transcript));
    }
  };
  fill(corpus.labeled, spec.labeled, "labeled", true);
  fill(corpus.unlabeled, spec.unlabeled, "unlabeled", false);
  fill(corpus.dev, spec.dev, "dev", true);
  fill(corpus.test, spec.test, "test", true);
  return corpus;
}

SpeakerEmbedding extract_speaker_embedding(const FeatureSequence& features,
                                           int embedding_dim) {
  if (features.num_frames() < 1) {
    throw std::invalid_argument("speaker embedding requires at least one frame");
  }
  int F = features.num_bins();
  Vec mean = features.frames.colwise().mean();
  Vec var = Vec::Zero(F);
  for (int s = 0; s < features.num_frames(); ++s) {
    Vec d = features.frames.row(s).transpose() - mean;
    var += d.cwiseProduct(d);
  }
  var /= static_cast<double>(features.num_frames());
  Vec stats(2 * F);
  stats.head(F) = mean;
  stats.tail(F) = var.cwiseSqrt();

  // Fixed projection, a function of (F, embedding_dim) only, so the embedder
  // is identical across corpora and process runs.
  Rng rng = Rng::derive(0x5bea7ce5ULL, static_cast<std::uint64_t>(F),
                        static_cast<std::uint64_t>(embedding_dim));
  Mat proj(embedding_dim, 2 * F);
  for (Eigen::Index i = 0; i < proj.size(); ++i) {
    proj.data()[i] = rng.gaussian() / std::sqrt(2.0 * F);
  }

  SpeakerEmbedding emb;
  emb.vector = proj * stats;
  double norm = emb.vector.norm();
  if (norm == 0.0) {
    // Degenerate all-zero statistics; fall back to a fixed unit vector.
    emb.vector = Vec::Zero(embedding_dim);
    emb.vector[0] = 1.0;
  } else {
    emb.vector /= norm;
  }
  return emb;
}

void save_corpus(const CorpusSplit& corpus, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "feats");
  std::ofstream manifest(fs::path(dir) / "manifest.tsv");
  if (!manifest) {
    throw std::runtime_error("cannot write manifest in " + dir);
  }
  Vocabulary vocab;
  auto dump = [&](const std::vector<Utterance>& split, const char* name) {
    for (const Utterance& utt : split) {
      std::string text =
          utt.transcript ? detokenize(*utt.transcript, vocab) : std::string();
      manifest << utt.id << '\t' << utt.speaker_id << '\t' << name << '\t' << text
               << '\n';
      write_feature_matrix((fs::path(dir) / "feats" / (utt.id + ".fmat")).string(),
                           utt.features.frames);
    }
  };
  dump(corpus.labeled, "labeled");
  dump(corpus.unlabeled, "unlabeled");
  dump(corpus.dev, "dev");
  dump(corpus.test, "test");
  if (!manifest) {
    throw std::runtime_error("manifest write failed in " + dir);
  }
}

CorpusSplit load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream manifest(fs::path(dir) / "manifest.tsv");
  if (!manifest) {
    throw std::runtime_error("cannot open manifest in " + dir);
  }
  Vocabulary vocab;
  CorpusSplit corpus;
  std::string line;
  int line_no = 0;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        throw std::runtime_error("manifest line " + std::to_string(line_no) +
                                 ": expected 4 tab-separated columns");
      }
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    cols.push_back(line.substr(start));

    Utterance utt;
    utt.id = cols[0];
    utt.speaker_id = std::stoi(cols[1]);
    utt.features = FeatureSequence(
        read_feature_matrix((fs::path(dir) / "feats" / (utt.id + ".fmat")).string()));
    if (!cols[3].empty()) {
      utt.transcript = tokenize(cols[3], vocab);
    }
    const std::string& split = cols[2];
    if (split == "labeled") {
      corpus.labeled.push_back(std::move(utt));
    } else if (split == "unlabeled") {
      corpus.unlabeled.push_back(std::move(utt));
    } else if (split == "dev") {
      corpus.dev.push_back(std::move(utt));
    } else if (split == "test") {
      corpus.test.push_back(std::move(utt));
    } else {
      throw std::runtime_error("manifest line " + std::to_string(line_no) +
                               ": unknown split '" + split + "'");
    }
  }
  if (corpus.labeled.empty() && corpus.unlabeled.empty() && corpus.dev.empty() &&
      corpus.test.empty()) {
    throw std::runtime_error("empty corpus in " + dir);
  }
  const Utterance* any = !corpus.labeled.empty()     ? &corpus.labeled.front()
                         : !corpus.unlabeled.empty() ? &corpus.unlabeled.front()
                         : !corpus.dev.empty()       ? &corpus.dev.front()
                                                     : &corpus.test.front();
  corpus.feature_dim = any->features.num_bins();
  return corpus;
}

}  // namespace ssc
