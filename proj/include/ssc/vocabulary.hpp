// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>

#include "ssc/types.hpp"

namespace ssc {

// The canonical 29-token character set: a combined start/end marker, space,
// apostrophe, and the lowercase letters. The ordering is fixed:
//   0         sos/eos
//   1         ' ' (space)
//   2         '\'' (apostrophe)
//   3 .. 28   'a' .. 'z'
class Vocabulary {
 public:
  static constexpr int kSize = 29;
  static constexpr int kSosEos = 0;
  static constexpr int kSpace = 1;
  static constexpr int kApostrophe = 2;

  Vocabulary();

  int size() const { return kSize; }
  // Id of a single-character token; -1 if the character is not in the set.
  int id_of(char c) const;
  // Printable form of a token id ("<sos/eos>" for 0).
  const std::string& token(int id) const;

 private:
  std::array<std::string, kSize> tokens_;
  std::array<int, 256> char_to_id_;
};

// The canonical vocabulary.
Vocabulary build_vocabulary();

// One id per character after lowercasing. No sos/eos is appended; callers
// that need a terminator append Vocabulary::kSosEos themselves. Throws
// std::invalid_argument naming the character and position if the text
// contains anything outside the 28 representable characters.
TokenSequence tokenize(const std::string& text, const Vocabulary& vocab);

// Inverse of tokenize on sos/eos-free sequences; sos/eos ids are dropped.
// Throws std::invalid_argument on out-of-range ids.
std::string detokenize(const TokenSequence& ids, const Vocabulary& vocab);

}  // namespace ssc
