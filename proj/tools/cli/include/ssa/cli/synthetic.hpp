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

#ifndef SSA_CLI_SYNTHETIC_HPP_
#define SSA_CLI_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "ssa/corpus.hpp"

namespace ssa::cli {

struct SynthConfig {
  int n_sentences = 500;
  uint64_t seed = 1;
  // Exactly round(null_fraction * n_sentences) documents have no opinions.
  double null_fraction = 0.1;
};

// Templated sentences over a closed vocabulary with exact annotations:
// holder/target/expression patterns, holder-less and target-less variants,
// two-tuple sentences, and opinion-free null sentences.
std::vector<RawDocument> GenerateSyntheticCorpus(const SynthConfig& config);

}  // namespace ssa::cli

#endif  // SSA_CLI_SYNTHETIC_HPP_
