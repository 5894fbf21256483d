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

#ifndef SSA_CODEC_HPP_
#define SSA_CODEC_HPP_

// Pointer-index sequences for opinion tuples.
//
// For a sentence of n tokens, indices 1..n point at tokens, n+1 is EOS and
// n+2..n+4 are the polarity classes in kPolarityOrder. Each tuple occupies
// seven indices:
//
//   target.start target.end expr.start expr.end holder.start holder.end class
//
// and the sequence is terminated by a single EOS.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ssa/corpus.hpp"
#include "ssa/diagnostics.hpp"
#include "ssa/opinion.hpp"

namespace ssa {

inline constexpr int kGroupSize = 7;

struct IndexSpace {
  int n_tokens = 0;

  int eos_index() const { return n_tokens + 1; }
  int class_base() const { return n_tokens + 2; }
  int max_index() const { return n_tokens + 1 + kNumPolarities; }
  int size() const { return max_index(); }

  bool is_pointer(int y) const { return y >= 1 && y <= n_tokens; }
  bool is_class(int y) const { return y >= class_base() && y <= max_index(); }
  int class_index(Polarity p) const;
  Polarity polarity_of(int class_idx) const;
};

struct IndexSequence {
  std::vector<int> indices;
  IndexSpace space;
};

IndexSpace IndexSpaceFor(const TokenizedSentence& sent);

// Sort key: expression start, target start, holder start, then the span ends
// and polarity so the order is total.
void CanonicalSort(std::vector<OpinionTuple>* tuples);

// Throws ValidationError if any span falls outside the pointer range.
IndexSequence EncodeTuples(std::vector<OpinionTuple> tuples,
                           const IndexSpace& space);

struct DecodeResult {
  std::vector<OpinionTuple> tuples;
  Diagnostics diagnostics;
};

// Total: arbitrary integer input yields the well-formed tuples plus one
// diagnostic per dropped group.
DecodeResult DecodeSequence(std::span<const int> seq, const IndexSpace& space);

struct EosMarker {
  bool operator==(const EosMarker&) const = default;
};

using IndexToken = std::variant<std::string, Polarity, EosMarker>;

IndexToken IndexToToken(int y, const TokenizedSentence& sent,
                        const IndexSpace& space);

struct SequenceCheck {
  bool ok = true;
  // Offset of the first offending index (seq.size() if EOS is missing).
  size_t position = 0;
  std::string reason;

  explicit operator bool() const { return ok; }
};

SequenceCheck ValidateSequence(std::span<const int> seq,
                               const IndexSpace& space);

}  // namespace ssa

#endif  // SSA_CODEC_HPP_
