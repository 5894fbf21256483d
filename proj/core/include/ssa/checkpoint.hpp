// Copyright 2026 The ssagen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSA_CHECKPOINT_HPP_
#define SSA_CHECKPOINT_HPP_

// Checkpoint layout:
//
//   "SSAGEN-CKPT/1\n"
//   uint64 little-endian header length
//   JSON header {config, vocabulary, epoch, seed, metadata, tensors}
//   raw little-endian float64 tensor data, row-major, in header order

#include <string>
#include <string_view>

#include "ssa/model.hpp"

namespace ssa {

inline constexpr std::string_view kCheckpointMagic = "SSAGEN-CKPT/1\n";

struct Checkpoint {
  ModelConfig config;
  Vocabulary vocabulary;
  Parameters params{DefaultConfig()};
  int epoch = 0;
  uint64_t seed = 0;
  // Free-form JSON object text, stored verbatim.
  std::string metadata_json = "{}";

 private:
  static ModelConfig DefaultConfig() {
    ModelConfig c;
    c.vocab_size = 1;
    return c;
  }
};

std::string SerializeCheckpoint(const Checkpoint& ckpt);
// Throws ParseError on framing errors, ValidationError on inconsistent
// contents.
Checkpoint DeserializeCheckpoint(std::string_view bytes);

// Writes to `path + ".tmp"` and renames over `path`.
void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace ssa

#endif  // SSA_CHECKPOINT_HPP_
