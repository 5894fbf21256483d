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

#ifndef SSA_INFERENCE_HPP_
#define SSA_INFERENCE_HPP_

#include <span>
#include <vector>

#include "ssa/codec.hpp"
#include "ssa/model.hpp"

namespace ssa {

struct GenerationConfig {
  int beam_size = 4;
  int max_tuples = 10;
  bool constrained = true;
  // Upper bound on generated indices, EOS included.
  int length_cap = 71;

  void Validate() const;
};

struct BeamHypothesis {
  std::vector<int> indices;
  double log_prob = 0.0;
  bool finished = false;
};

// Next-index log-probabilities over 1..n+4 (entry i-1 is index i).
class StepScorer {
 public:
  virtual ~StepScorer() = default;
  virtual int n_tokens() const = 0;
  virtual ad::Vector LogProbs(std::span<const int> history) = 0;
};

// Runs the decoder once per call over a cached encoder state.
class ModelScorer : public StepScorer {
 public:
  ModelScorer(std::span<const int> token_ids, const Parameters& params,
              const ModelConfig& config);
  int n_tokens() const override { return enc_.n_tokens(); }
  ad::Vector LogProbs(std::span<const int> history) override;

 private:
  const Parameters& params_;
  const ModelConfig& config_;
  EncoderState enc_;
};

// Indices allowed at `position_in_group` (0..6) given the indices already
// emitted in the current group.
std::vector<int> ConstraintMask(int position_in_group, const IndexSpace& space,
                                std::span<const int> partial_group);

struct GenerationResult {
  IndexSequence sequence;
  double log_prob = 0.0;
  Diagnostics diagnostics;
};

// Beam search without length normalization. Among equal scores the
// smaller index wins, then the shorter sequence.
GenerationResult Generate(StepScorer& scorer, const GenerationConfig& gen);
GenerationResult Generate(std::span<const int> token_ids,
                          const Parameters& params, const ModelConfig& config,
                          const GenerationConfig& gen);

struct Prediction {
  std::vector<OpinionTuple> tuples;
  Diagnostics diagnostics;
};

Prediction DecodePrediction(const IndexSequence& seq,
                            const TokenizedSentence& sent);

}  // namespace ssa

#endif  // SSA_INFERENCE_HPP_
