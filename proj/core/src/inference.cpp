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

#include "ssa/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssa {
namespace {

struct Candidate {
  size_t parent;
  int index;
  double score;
};

// Lexicographic comparison of parent-indices + appended index.
bool SequenceLess(const std::vector<int>& a_base, int a_next,
                  const std::vector<int>& b_base, int b_next) {
  const size_t n = std::min(a_base.size(), b_base.size());
  for (size_t i = 0; i < n; ++i) {
    if (a_base[i] != b_base[i]) return a_base[i] < b_base[i];
  }
  if (a_base.size() != b_base.size()) return a_base.size() < b_base.size();
  return a_next < b_next;
}

bool BetterFinished(const BeamHypothesis& a, const BeamHypothesis& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  const size_t n = std::min(a.indices.size(), b.indices.size());
  for (size_t i = 0; i < n; ++i) {
    if (a.indices[i] != b.indices[i]) return a.indices[i] < b.indices[i];
  }
  return a.indices.size() < b.indices.size();
}

double Rescore(StepScorer& scorer, const std::vector<int>& seq) {
  double lp = 0.0;
  for (size_t t = 0; t < seq.size(); ++t) {
    const ad::Vector step =
        scorer.LogProbs(std::span<const int>(seq).first(t));
    lp += step(seq[t] - 1);
  }
  return lp;
}

}  // namespace

void GenerationConfig::Validate() const {
  if (beam_size < 1) throw ValidationError("beam_size must be >= 1");
  if (length_cap < 1) throw ValidationError("length_cap must be >= 1");
  if (max_tuples < 0) throw ValidationError("max_tuples must be >= 0");
}

ModelScorer::ModelScorer(std::span<const int> token_ids,
                         const Parameters& params, const ModelConfig& config)
    : params_(params), config_(config), enc_(Encode(token_ids, params, config)) {}

ad::Vector ModelScorer::LogProbs(std::span<const int> history) {
  const DecoderStep step = RunDecoderStep(enc_, history, params_, config_);
  const double mx = step.logits.maxCoeff();
  const double lse = mx + std::log((step.logits.array() - mx).exp().sum());
  return step.logits.array() - lse;
}

std::vector<int> ConstraintMask(int position_in_group, const IndexSpace& space,
                                std::span<const int> partial_group) {
  std::vector<int> allowed;
  const int n = space.n_tokens;
  switch (position_in_group) {
    case 0:
      for (int i = 1; i <= n; ++i) allowed.push_back(i);
      allowed.push_back(space.eos_index());
      break;
    case 1:
    case 3:
    case 5: {
      const int start =
          static_cast<int>(partial_group.size()) >= position_in_group
              ? partial_group[position_in_group - 1]
              : 1;
      for (int i = std::max(1, start); i <= n; ++i) allowed.push_back(i);
      break;
    }
    case 2:
    case 4:
      for (int i = 1; i <= n; ++i) allowed.push_back(i);
      break;
    case 6:
      for (int k = 0; k < kNumPolarities; ++k) {
        allowed.push_back(space.class_base() + k);
      }
      break;
    default:
      break;
  }
  return allowed;
}

GenerationResult Generate(StepScorer& scorer, const GenerationConfig& gen) {
  gen.Validate();
  const IndexSpace space{scorer.n_tokens()};
  const int eos = space.eos_index();
  const int cap = std::min(gen.length_cap, kGroupSize * gen.max_tuples + 1);

  std::vector<BeamHypothesis> live(1);
  std::vector<BeamHypothesis> finished;
  std::vector<bool> forced_flags;
  GenerationResult result;
  result.sequence.space = space;

  auto allowed_for = [&](const std::vector<int>& h) {
    std::vector<int> allowed;
    if (!gen.constrained) {
      for (int i = 1; i <= space.max_index(); ++i) allowed.push_back(i);
      return allowed;
    }
    const int pos = static_cast<int>(h.size()) % kGroupSize;
    if (pos == 0 && static_cast<int>(h.size()) + kGroupSize + 1 > cap) {
      return std::vector<int>{eos};
    }
    const auto group = std::span<const int>(h).last(pos);
    return ConstraintMask(pos, space, group);
  };

  while (!live.empty()) {
    std::vector<Candidate> cands;
    for (size_t p = 0; p < live.size(); ++p) {
      const ad::Vector lp = scorer.LogProbs(live[p].indices);
      for (int y : allowed_for(live[p].indices)) {
        cands.push_back({p, y, live[p].log_prob + lp(y - 1)});
      }
    }
    std::sort(cands.begin(), cands.end(),
              [&](const Candidate& a, const Candidate& b) {
                if (a.score != b.score) return a.score > b.score;
                return SequenceLess(live[a.parent].indices, a.index,
                                    live[b.parent].indices, b.index);
              });
    if (static_cast<int>(cands.size()) > gen.beam_size) {
      cands.resize(gen.beam_size);
    }
    std::vector<BeamHypothesis> next;
    for (const Candidate& c : cands) {
      BeamHypothesis h;
      h.indices = live[c.parent].indices;
      h.indices.push_back(c.index);
      h.log_prob = c.score;
      if (c.index == eos) {
        h.finished = true;
        finished.push_back(std::move(h));
        forced_flags.push_back(false);
      } else if (static_cast<int>(h.indices.size()) >= cap) {
        // Cut back to the last complete group that leaves room for EOS.
        const size_t keep =
            (std::min<size_t>(h.indices.size(), cap - 1) / kGroupSize) *
            kGroupSize;
        h.indices.resize(keep);
        h.indices.push_back(eos);
        h.log_prob = Rescore(scorer, h.indices);
        h.finished = true;
        finished.push_back(std::move(h));
        forced_flags.push_back(true);
      } else {
        next.push_back(std::move(h));
      }
    }
    live = std::move(next);
    if (static_cast<int>(finished.size()) >= gen.beam_size) break;
    if (!finished.empty() && !live.empty()) {
      double best_finished = -std::numeric_limits<double>::infinity();
      for (const auto& f : finished) {
        best_finished = std::max(best_finished, f.log_prob);
      }
      double best_live = -std::numeric_limits<double>::infinity();
      for (const auto& h : live) best_live = std::max(best_live, h.log_prob);
      // Scores never increase, so no live hypothesis can overtake.
      if (best_finished >= best_live) break;
    }
  }

  size_t best = 0;
  for (size_t i = 1; i < finished.size(); ++i) {
    if (BetterFinished(finished[i], finished[best])) best = i;
  }
  result.sequence.indices = finished[best].indices;
  result.log_prob = finished[best].log_prob;
  if (forced_flags[best]) {
    result.diagnostics.push_back(
        {DiagCode::kLengthCapReached,
         "length cap " + std::to_string(cap) +
             " reached without EOS; truncated to the last full group"});
  }
  return result;
}

GenerationResult Generate(std::span<const int> token_ids,
                          const Parameters& params, const ModelConfig& config,
                          const GenerationConfig& gen) {
  ModelScorer scorer(token_ids, params, config);
  return Generate(scorer, gen);
}

Prediction DecodePrediction(const IndexSequence& seq,
                            const TokenizedSentence& sent) {
  DecodeResult decoded = DecodeSequence(seq.indices, IndexSpaceFor(sent));
  return {std::move(decoded.tuples), std::move(decoded.diagnostics)};
}

}  // namespace ssa
