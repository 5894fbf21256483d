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

#include "ssa/codec.hpp"

#include <algorithm>
#include <tuple>

namespace ssa {

std::string_view PolarityName(Polarity p) {
  switch (p) {
    case Polarity::kNeutral: return "Neutral";
    case Polarity::kPositive: return "Positive";
    case Polarity::kNegative: return "Negative";
  }
  return "Neutral";
}

std::optional<Polarity> PolarityFromName(std::string_view name) {
  if (name == "Neutral") return Polarity::kNeutral;
  if (name == "Positive") return Polarity::kPositive;
  if (name == "Negative") return Polarity::kNegative;
  return std::nullopt;
}

int IndexSpace::class_index(Polarity p) const {
  for (int k = 0; k < kNumPolarities; ++k) {
    if (kPolarityOrder[k] == p) return class_base() + k;
  }
  return class_base();
}

Polarity IndexSpace::polarity_of(int class_idx) const {
  return kPolarityOrder[class_idx - class_base()];
}

IndexSpace IndexSpaceFor(const TokenizedSentence& sent) {
  return IndexSpace{sent.size()};
}

void CanonicalSort(std::vector<OpinionTuple>* tuples) {
  auto key = [](const OpinionTuple& t) {
    return std::make_tuple(t.expression.start, t.target.start, t.holder.start,
                           t.expression.end, t.target.end, t.holder.end,
                           static_cast<int>(t.polarity));
  };
  std::stable_sort(tuples->begin(), tuples->end(),
                   [&](const OpinionTuple& a, const OpinionTuple& b) {
                     return key(a) < key(b);
                   });
}

IndexSequence EncodeTuples(std::vector<OpinionTuple> tuples,
                           const IndexSpace& space) {
  CanonicalSort(&tuples);
  IndexSequence seq;
  seq.space = space;
  seq.indices.reserve(tuples.size() * kGroupSize + 1);
  auto check = [&](TokenSpan s, const char* what) {
    if (!space.is_pointer(s.start) || !space.is_pointer(s.end) ||
        s.start > s.end) {
      throw ValidationError(std::string(what) + " span (" +
                            std::to_string(s.start) + "," +
                            std::to_string(s.end) + ") outside 1.." +
                            std::to_string(space.n_tokens));
    }
  };
  for (const auto& t : tuples) {
    check(t.target, "target");
    check(t.expression, "expression");
    check(t.holder, "holder");
    seq.indices.insert(seq.indices.end(),
                       {t.target.start, t.target.end, t.expression.start,
                        t.expression.end, t.holder.start, t.holder.end,
                        space.class_index(t.polarity)});
  }
  seq.indices.push_back(space.eos_index());
  return seq;
}

DecodeResult DecodeSequence(std::span<const int> seq, const IndexSpace& space) {
  DecodeResult out;
  const int eos = space.eos_index();
  size_t pos = 0;
  int group_no = 0;
  bool terminated = false;
  while (pos < seq.size()) {
    if (seq[pos] == eos) {
      terminated = true;
      break;
    }
    const size_t remaining = seq.size() - pos;
    const size_t take = std::min<size_t>(kGroupSize, remaining);
    auto group = seq.subspan(pos, take);
    const auto eos_at = std::find(group.begin(), group.end(), eos);
    if (eos_at != group.end() || take < kGroupSize) {
      const bool hit_eos = eos_at != group.end();
      out.diagnostics.push_back(
          {DiagCode::kTruncatedGroup,
           "group " + std::to_string(group_no) + " has " +
               std::to_string(hit_eos ? eos_at - group.begin() : take) +
               " of 7 indices"});
      terminated = hit_eos;
      pos = seq.size();
      break;
    }
    bool ok = true;
    for (int k = 0; k < 6; ++k) ok &= space.is_pointer(group[k]);
    ok &= space.is_class(group[6]);
    ok = ok && group[0] <= group[1] && group[2] <= group[3] &&
         group[4] <= group[5];
    if (!ok) {
      out.diagnostics.push_back({DiagCode::kMalformedGroup,
                                 "group " + std::to_string(group_no) +
                                     " violates the slot grammar"});
    } else {
      OpinionTuple t;
      t.target = {group[0], group[1]};
      t.expression = {group[2], group[3]};
      t.holder = {group[4], group[5]};
      t.polarity = space.polarity_of(group[6]);
      if (std::find(out.tuples.begin(), out.tuples.end(), t) !=
          out.tuples.end()) {
        out.diagnostics.push_back({DiagCode::kDuplicateTuple,
                                   "group " + std::to_string(group_no) +
                                       " repeats an earlier tuple"});
      } else {
        out.tuples.push_back(t);
      }
    }
    pos += kGroupSize;
    ++group_no;
  }
  if (!terminated) {
    out.diagnostics.push_back(
        {DiagCode::kMissingEos, "sequence ends without EOS"});
  }
  return out;
}

IndexToken IndexToToken(int y, const TokenizedSentence& sent,
                        const IndexSpace& space) {
  if (y < 1 || y > space.max_index()) {
    throw ValidationError("index " + std::to_string(y) + " outside 1.." +
                          std::to_string(space.max_index()));
  }
  if (space.is_pointer(y)) return sent.tokens.at(y - 1);
  if (y == space.eos_index()) return EosMarker{};
  return space.polarity_of(y);
}

SequenceCheck ValidateSequence(std::span<const int> seq,
                               const IndexSpace& space) {
  auto fail = [](size_t pos, std::string reason) {
    return SequenceCheck{false, pos, std::move(reason)};
  };
  const int eos = space.eos_index();
  for (size_t i = 0; i < seq.size(); ++i) {
    const size_t slot = i % kGroupSize;
    const int y = seq[i];
    if (y == eos) {
      if (slot != 0) return fail(i, "EOS inside a group");
      if (i + 1 != seq.size()) return fail(i + 1, "indices after EOS");
      return {};
    }
    if (slot < 6) {
      if (!space.is_pointer(y)) return fail(i, "expected a pointer index");
      if (slot % 2 == 1 && y < seq[i - 1]) {
        return fail(i, "span end precedes its start");
      }
    } else if (!space.is_class(y)) {
      return fail(i, "expected a class index");
    }
  }
  return fail(seq.size(), "missing EOS");
}

}  // namespace ssa
