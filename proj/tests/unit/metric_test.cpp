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

#include "ssa/metric.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "ssa/corpus.hpp"

namespace ssa {
namespace {

constexpr auto kPred = Denominator::kPredicted;
constexpr auto kGold = Denominator::kGold;

TokenSet Range(int a, int b) {
  TokenSet s;
  for (int i = a; i <= b; ++i) s.push_back(i);
  return s;
}

std::vector<SentGraph> One(std::vector<GraphTuple> tuples) {
  return {SentGraph{"s", std::move(tuples)}};
}

// Hotel review with two exact and two partial predictions. Tokens:
// The(1) size(2) of(3) room(4) is(5) reasonable(6) ,(7) but(8) floor(9) ,(10)
// walls(11) and(12) ceiling(13) are(14) in(15) very(16) poor(17)
// conditions(18) .(19)
std::vector<SentGraph> HotelGold() {
  return One({{{}, Range(1, 4), {6}, Polarity::kPositive},
              {{}, {11}, Range(15, 18), Polarity::kNegative},
              {{}, {9}, Range(15, 18), Polarity::kNegative},
              {{}, {13}, Range(15, 18), Polarity::kNegative}});
}

std::vector<SentGraph> HotelPred() {
  return One({{{}, Range(1, 2), {6}, Polarity::kPositive},
              {{}, {11}, Range(16, 17), Polarity::kNegative},
              {{}, {9}, Range(15, 18), Polarity::kNegative},
              {{}, {13}, Range(15, 18), Polarity::kNegative}});
}

TEST(SpanWeight, Cases) {
  EXPECT_EQ(SpanWeight({2, 3, 4}, {2, 3, 4}, kPred), 1.0);
  EXPECT_EQ(SpanWeight({2, 3, 4}, {2, 3, 4}, kGold), 1.0);
  EXPECT_DOUBLE_EQ(SpanWeight({3, 4}, {2, 3, 4}, kGold), 2.0 / 3.0);
  EXPECT_EQ(SpanWeight({3, 4}, {2, 3, 4}, kPred), 1.0);
  EXPECT_EQ(SpanWeight({}, {}, kGold), 1.0);
  EXPECT_EQ(SpanWeight({}, {1}, kGold), 0.0);
  EXPECT_EQ(SpanWeight({1}, {}, kPred), 0.0);
  EXPECT_EQ(SpanWeight({1}, {2}, kPred), 0.0);
}

TEST(TupleWeight, Cases) {
  // "I would not suggest this book": holder I, target "this book",
  // expression "would not suggest".
  const GraphTuple gold{{1}, {5, 6}, {2, 3, 4}, Polarity::kNegative};
  EXPECT_EQ(TupleWeight(gold, gold, kGold), 1.0);
  GraphTuple pred = gold;
  pred.expression = {3, 4};
  EXPECT_DOUBLE_EQ(TupleWeight(pred, gold, kGold), (1.0 + 1.0 + 2.0 / 3.0) / 3);
  EXPECT_DOUBLE_EQ(TupleWeight(pred, gold, kGold), 8.0 / 9.0);
  EXPECT_EQ(TupleWeight(pred, gold, kPred), 1.0);
  pred = gold;
  pred.polarity = Polarity::kPositive;
  EXPECT_EQ(TupleWeight(pred, gold, kGold), 0.0);
  pred = gold;
  pred.expression = {5};
  EXPECT_EQ(TupleWeight(pred, gold, kGold), 0.0);
}

TEST(SgF1, ExactMatchIsOne) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SentGraph> gold;
    for (int s = 0; s < 5; ++s) {
      gold.push_back(testing::RandomGraph(rng, "s" + std::to_string(s), 10, 5));
    }
    const auto r = SgF1(gold, gold);
    EXPECT_EQ(r.f1, 1.0);
    EXPECT_EQ(r.precision, 1.0);
    EXPECT_EQ(r.recall, 1.0);
  }
}

TEST(SgF1, DisjointOrFlippedIsZero) {
  const auto gold = One({{{1}, {2}, {3, 4}, Polarity::kPositive}});
  auto r = SgF1(gold, One({{{1}, {2}, {5, 6}, Polarity::kPositive}}));
  EXPECT_EQ(r.f1, 0.0);
  r = SgF1(gold, One({{{1}, {2}, {3, 4}, Polarity::kNegative}}));
  EXPECT_EQ(r.f1, 0.0);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
}

TEST(SgF1, EmptySides) {
  const auto gold = One({{{}, {2}, {3}, Polarity::kNeutral}});
  auto r = SgF1(gold, One({}));
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f1, 0.0);
  r = SgF1(One({}), gold);
  EXPECT_EQ(r.f1, 0.0);
  r = SgF1(One({}), One({}));
  EXPECT_EQ(r.f1, 1.0);
  // An empty sentence adds nothing to the corpus sums.
  std::vector<SentGraph> g2 = gold, p2 = One({{{}, {2}, {3}, Polarity::kNeutral}});
  g2.push_back({"e", {}});
  p2.push_back({"e", {}});
  EXPECT_EQ(SgF1(g2, p2).f1, 1.0);
}

TEST(SgF1, HotelReviewFixture) {
  const auto gold = HotelGold();
  const auto pred = HotelPred();
  const auto r = SgF1(gold, pred);
  const auto o = OracleSgF1(gold, pred);
  EXPECT_NEAR(r.f1, o.f1, 1e-12);
  EXPECT_GT(r.f1, 0.5);
  EXPECT_LT(r.f1, 1.0);
  // Hand arithmetic: precision masses all 1; recall loses 1/6 on two pairs.
  EXPECT_NEAR(r.precision, 1.0, 1e-12);
  EXPECT_NEAR(r.recall, 11.0 / 12.0, 1e-12);
  EXPECT_NEAR(r.f1, 22.0 / 23.0, 1e-12);
  const auto& pairs = r.per_sentence[0].recall_pairs;
  ASSERT_EQ(pairs.size(), 4u);
  EXPECT_EQ(std::count_if(pairs.begin(), pairs.end(),
                          [](const MatchedPair& p) { return p.weight == 1.0; }),
            2);
}

TEST(SgF1, HotelReviewFromCharacterOffsets) {
  const std::string text =
      "The size of room is reasonable , but floor , walls and ceiling are in "
      "very poor conditions .";
  auto entity = [&](const std::string& phrase, size_t from = 0) {
    const int b = static_cast<int>(text.find(phrase, from));
    return Entity{{phrase}, {{b, b + static_cast<int>(phrase.size())}}};
  };
  auto doc = [&](const std::string& t1, const std::string& e2) {
    RawDocument d{"hotel", text, {}};
    d.opinions.push_back({{}, entity(t1), entity("reasonable"), Polarity::kPositive, {}});
    d.opinions.push_back({{}, entity("walls"), entity(e2), Polarity::kNegative, {}});
    for (const char* t : {"floor", "ceiling"}) {
      d.opinions.push_back(
          {{}, entity(t), entity("in very poor conditions"), Polarity::kNegative, {}});
    }
    return d;
  };
  const std::vector<SentGraph> gold{DocumentGraph(doc("The size of room", "in very poor conditions"))};
  const std::vector<SentGraph> pred{DocumentGraph(doc("The size", "very poor"))};
  EXPECT_EQ(gold[0].tuples, HotelGold()[0].tuples);
  EXPECT_EQ(pred[0].tuples, HotelPred()[0].tuples);
}

TEST(SgF1, MatchesOracleOnRandomGraphs) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = testing::UniformInt(rng, 1, 8);
    std::vector<SentGraph> gold, pred;
    const int sents = testing::UniformInt(rng, 1, 3);
    for (int s = 0; s < sents; ++s) {
      const std::string id = "s" + std::to_string(s);
      gold.push_back(testing::RandomGraph(rng, id, n, kOracleMaxTuples));
      pred.push_back(testing::RandomGraph(rng, id, n, kOracleMaxTuples));
    }
    const auto a = SgF1(gold, pred);
    const auto b = OracleSgF1(gold, pred);
    ASSERT_NEAR(a.weighted_tp_precision, b.weighted_tp_precision, 1e-12);
    ASSERT_NEAR(a.weighted_tp_recall, b.weighted_tp_recall, 1e-12);
    ASSERT_NEAR(a.f1, b.f1, 1e-12);
    ASSERT_EQ(a.n_gold, b.n_gold);
    ASSERT_EQ(a.n_predicted, b.n_predicted);
  }
}

// Independent blocks of at most three tuples per side with pairwise
// disjoint expressions across blocks, so the optimum is the sum of block
// optima.
TEST(SgF1, LargeInstancesDecomposeIntoBlocks) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int blocks = testing::UniformInt(rng, 5, 9);
    SentGraph gold{"big", {}}, pred{"big", {}};
    double expect_p = 0.0, expect_r = 0.0;
    for (int b = 0; b < blocks; ++b) {
      const int offset = b * 10;
      auto g = testing::RandomGraph(rng, "b", 6, 3);
      auto p = testing::RandomGraph(rng, "b", 6, 3);
      while (g.tuples.size() < 3) g.tuples.push_back({{}, {1}, {1}, Polarity::kNeutral});
      while (p.tuples.size() < 3) p.tuples.push_back({{}, {2}, {2}, Polarity::kNeutral});
      const std::vector<SentGraph> gv{g}, pv{p};
      const auto block = OracleSgF1(gv, pv);
      expect_p += block.weighted_tp_precision;
      expect_r += block.weighted_tp_recall;
      auto shift = [&](TokenSet s) {
        for (int& t : s) t += offset;
        return s;
      };
      for (const auto& t : g.tuples) {
        gold.tuples.push_back({shift(t.holder), shift(t.target),
                               shift(t.expression), t.polarity});
      }
      for (const auto& t : p.tuples) {
        pred.tuples.push_back({shift(t.holder), shift(t.target),
                               shift(t.expression), t.polarity});
      }
    }
    std::shuffle(pred.tuples.begin(), pred.tuples.end(), rng);
    ASSERT_GT(gold.tuples.size(), 12u);
    ASSERT_GT(pred.tuples.size(), 12u);
    const std::vector<SentGraph> gv{gold}, pv{pred};
    const auto r = SgF1(gv, pv);
    EXPECT_NEAR(r.weighted_tp_precision, expect_p, 1e-9);
    EXPECT_NEAR(r.weighted_tp_recall, expect_r, 1e-9);
    // One-sided large instance goes through the transposed exact search.
    SentGraph small = pred;
    small.tuples.resize(5);
    const std::vector<SentGraph> sv{small};
    const auto t = SgF1(gv, sv);
    const auto swapped = SgF1(sv, gv);
    EXPECT_NEAR(t.precision, swapped.recall, 1e-12);
  }
}

TEST(SgF1, SwapExchangesPrecisionAndRecall) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto g = testing::RandomGraph(rng, "x", 7, 5);
    const auto p = testing::RandomGraph(rng, "x", 7, 5);
    const std::vector<SentGraph> gv{g}, pv{p};
    const auto a = SgF1(gv, pv);
    const auto b = SgF1(pv, gv);
    EXPECT_NEAR(a.precision, b.recall, 1e-12);
    EXPECT_NEAR(a.recall, b.precision, 1e-12);
    EXPECT_NEAR(a.f1, b.f1, 1e-12);
  }
}

TEST(SgF1, ReportBounds) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<SentGraph> gv{testing::RandomGraph(rng, "x", 6, 6)};
    const std::vector<SentGraph> pv{testing::RandomGraph(rng, "x", 6, 6)};
    const auto r = SgF1(gv, pv);
    for (double v : {r.precision, r.recall, r.f1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_LE(r.f1, std::max(r.precision, r.recall) + 1e-15);
    EXPECT_LE(r.weighted_tp_precision, r.n_predicted + 1e-12);
    EXPECT_LE(r.weighted_tp_recall, r.n_gold + 1e-12);
  }
}

TEST(SgF1, SupersetSpanKeepsRecallMass) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = testing::RandomGraph(rng, "x", 8, 1);
    if (g.tuples.empty()) continue;
    GraphTuple p = g.tuples[0];
    p.expression = {p.expression.front()};
    const double before = TupleWeight(p, g.tuples[0], kGold);
    p.expression = g.tuples[0].expression;
    p.expression.push_back(20);
    EXPECT_GE(TupleWeight(p, g.tuples[0], kGold), before);
  }
}

TEST(SgF1, SentIdMismatchesRaise) {
  const std::vector<SentGraph> a{{"a", {}}}, b{{"b", {}}};
  EXPECT_THROW(SgF1(a, b), ValidationError);
  const std::vector<SentGraph> ab{{"a", {}}, {"b", {}}};
  EXPECT_THROW(SgF1(a, ab), ValidationError);
  EXPECT_THROW(SgF1(ab, a), ValidationError);
  const std::vector<SentGraph> dup{{"a", {}}, {"a", {}}};
  EXPECT_THROW(SgF1(dup, dup), ValidationError);
}

TEST(OracleSgF1, RejectsLargeInstances) {
  SentGraph g{"a", {}};
  for (int i = 0; i <= kOracleMaxTuples; ++i) {
    g.tuples.push_back({{}, {1}, {i + 1}, Polarity::kNeutral});
  }
  const std::vector<SentGraph> v{g};
  EXPECT_THROW(OracleSgF1(v, v), ValidationError);
}

TEST(ToGraphTuple, DropsNonePrefix) {
  const auto sent = Tokenize(RawDocument{"s", "I would not suggest this book", {}}, true);
  const GraphTuple t =
      ToGraphTuple({{1, 1}, {6, 7}, {3, 5}, Polarity::kNegative}, sent);
  EXPECT_TRUE(t.holder.empty());
  EXPECT_EQ(t.target, (TokenSet{5, 6}));
  EXPECT_EQ(t.expression, (TokenSet{2, 3, 4}));
}

}  // namespace
}  // namespace ssa
