// SPDX-License-Identifier: Apache-2.0

#include "ssc/vocabulary.hpp"

#include <cctype>
#include <stdexcept>

namespace ssc {

Vocabulary::Vocabulary() {
  tokens_[kSosEos] = "<sos/eos>";
  tokens_[kSpace] = " ";
  tokens_[kApostrophe] = "'";
  for (int i = 0; i < 26; ++i) {
    tokens_[3 + i] = std::string(1, static_cast<char>('a' + i));
  }
  char_to_id_.fill(-1);
  char_to_id_[static_cast<unsigned char>(' ')] = kSpace;
  char_to_id_[static_cast<unsigned char>('\'')] = kApostrophe;
  for (int i = 0; i < 26; ++i) {
    char_to_id_[static_cast<unsigned char>('a' + i)] = 3 + i;
  }
}

int Vocabulary::id_of(char c) const {
  return char_to_id_[static_cast<unsigned char>(c)];
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= kSize) {
    throw std::invalid_argument("token id out of range: " + std::to_string(id));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

Vocabulary build_vocabulary() { return Vocabulary(); }

TokenSequence tokenize(const std::string& text, const Vocabulary& vocab) {
  TokenSequence ids;
  ids.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    char c = static_cast<char>(
        std::tolower(static_cast<unsigned char>(text[pos])));
    int id = vocab.id_of(c);
    if (id < 0) {
      throw std::invalid_argument("unrepresentable character '" +
                                  std::string(1, text[pos]) + "' at position " +
                                  std::to_string(pos));
    }
    ids.push_back(id);
  }
  return ids;
}

std::string detokenize(const TokenSequence& ids, const Vocabulary& vocab) {
  std::string text;
  text.reserve(ids.size());
  for (int id : ids) {
    if (id < 0 || id >= Vocabulary::kSize) {
      throw std::invalid_argument("token id out of range: " + std::to_string(id));
    }
    if (id == Vocabulary::kSosEos) {
      continue;
    }
    text += vocab.token(id);
  }
  return text;
}

}  // namespace ssc
