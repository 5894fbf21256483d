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

#ifndef SSA_METRIC_HPP_
#define SSA_METRIC_HPP_

// Sentiment Graph F1.
//
// A predicted tuple can only match a gold tuple with the same polarity and
// overlapping expressions. A matched pair scores the mean, over holder,
// target and expression, of |pred & gold| / |denominator side|, where two
// empty spans score 1 and one empty span scores 0. Per sentence, predicted
// and gold tuples are paired one-to-one so the summed score is maximal;
// precision uses predicted-side denominators, recall gold-side ones, each
// with its own optimal pairing.

#include <span>
#include <string>
#include <vector>

#include "ssa/corpus.hpp"
#include "ssa/opinion.hpp"

namespace ssa {

// Sorted, duplicate-free token positions.
using TokenSet = std::vector<int>;

struct GraphTuple {
  TokenSet holder;
  TokenSet target;
  TokenSet expression;
  Polarity polarity = Polarity::kNeutral;

  bool operator==(const GraphTuple&) const = default;
};

struct SentGraph {
  std::string sent_id;
  std::vector<GraphTuple> tuples;
};

enum class Denominator { kPredicted, kGold };

double SpanWeight(const TokenSet& pred, const TokenSet& gold,
                  Denominator denom);
double TupleWeight(const GraphTuple& pred, const GraphTuple& gold,
                   Denominator denom);

struct MatchedPair {
  int pred = -1;
  int gold = -1;
  double weight = 0.0;
};

struct SentenceScore {
  std::string sent_id;
  int n_predicted = 0;
  int n_gold = 0;
  double weighted_tp_precision = 0.0;
  double weighted_tp_recall = 0.0;
  std::vector<MatchedPair> precision_pairs;
  std::vector<MatchedPair> recall_pairs;
};

struct SGF1Report {
  double weighted_tp_precision = 0.0;
  double weighted_tp_recall = 0.0;
  int64_t n_predicted = 0;
  int64_t n_gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<SentenceScore> per_sentence;
};

// Exact maximum-weight one-to-one assignment. Throws ValidationError when
// the sent_id sets differ.
SGF1Report SgF1(std::span<const SentGraph> gold, std::span<const SentGraph> pred);

inline constexpr int kOracleMaxTuples = 6;

// Reference implementation by enumeration of every partial injection.
// Throws ValidationError beyond kOracleMaxTuples per side.
SGF1Report OracleSgF1(std::span<const SentGraph> gold,
                      std::span<const SentGraph> pred);

// Token positions of an opinion tuple over a tokenized sentence; the None
// prefix token is dropped, so a span on it becomes empty.
GraphTuple ToGraphTuple(const OpinionTuple& t, const TokenizedSentence& sent);

// Tokens (1-based, no prefix) touched by the character offsets of each
// entity of each opinion.
SentGraph DocumentGraph(const RawDocument& doc);

}  // namespace ssa

#endif  // SSA_METRIC_HPP_
