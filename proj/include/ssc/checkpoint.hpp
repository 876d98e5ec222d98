// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssc/types.hpp"

namespace ssc {

// Single-file checkpoint, shared by the ASR and TTS models. Layout (all
// integers little-endian):
//
//   bytes 0..3   magic "SSCK"
//   u32          format version (1)
//   section      kind string ("asr" or "tts")
//   u32          number of config entries
//   per entry    u16 key length, key bytes, i64 value
//   u32          number of tensors
//   per tensor   u16 name length, name bytes, u32 rows, u32 cols,
//                rows*cols float32 values in row-major order
//
// Tensors appear in the model's parameter declaration order. Values are
// truncated to float32 on write.
struct Checkpoint {
  std::string kind;
  std::map<std::string, std::int64_t> config;
  std::vector<std::pair<std::string, Mat>> tensors;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ssc
