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

#ifndef SSA_OPINION_HPP_
#define SSA_OPINION_HPP_

#include <array>
#include <compare>
#include <optional>
#include <string_view>

namespace ssa {

enum class Polarity { kNeutral = 0, kPositive = 1, kNegative = 2 };

inline constexpr int kNumPolarities = 3;

// Order in which polarity classes occupy the class indices after EOS.
inline constexpr std::array<Polarity, kNumPolarities> kPolarityOrder = {
    Polarity::kNeutral, Polarity::kPositive, Polarity::kNegative};

std::string_view PolarityName(Polarity p);
std::optional<Polarity> PolarityFromName(std::string_view name);

// 1-based inclusive token span.
struct TokenSpan {
  int start = 1;
  int end = 1;

  int length() const { return end - start + 1; }
  auto operator<=>(const TokenSpan&) const = default;
};

// (holder, target, expression, polarity) over token positions of a
// tokenized, possibly None-prefixed, sentence.
struct OpinionTuple {
  TokenSpan holder;
  TokenSpan target;
  TokenSpan expression;
  Polarity polarity = Polarity::kNeutral;

  bool operator==(const OpinionTuple&) const = default;
};

}  // namespace ssa

#endif  // SSA_OPINION_HPP_
