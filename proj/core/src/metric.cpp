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

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

namespace ssa {
namespace {

using WeightMatrix = std::vector<std::vector<double>>;

size_t IntersectionSize(const TokenSet& a, const TokenSet& b) {
  size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

struct Assignment {
  double total = 0.0;
  std::vector<MatchedPair> pairs;
};

// rows x cols weights; each row uses at most one column and vice versa.
// Bitmask DP over the columns.
Assignment AssignByDp(const WeightMatrix& w, int cols) {
  const int rows = static_cast<int>(w.size());
  const size_t states = size_t{1} << cols;
  // best[r][mask]: max weight using rows r.. with columns in mask taken.
  std::vector<std::vector<double>> best(rows + 1,
                                        std::vector<double>(states, 0.0));
  for (int r = rows - 1; r >= 0; --r) {
    for (size_t mask = 0; mask < states; ++mask) {
      double v = best[r + 1][mask];
      for (int c = 0; c < cols; ++c) {
        if (mask & (size_t{1} << c) || w[r][c] <= 0.0) continue;
        v = std::max(v, w[r][c] + best[r + 1][mask | (size_t{1} << c)]);
      }
      best[r][mask] = v;
    }
  }
  Assignment a;
  a.total = best[0][0];
  size_t mask = 0;
  for (int r = 0; r < rows; ++r) {
    if (best[r][mask] == best[r + 1][mask]) continue;
    for (int c = 0; c < cols; ++c) {
      if (mask & (size_t{1} << c) || w[r][c] <= 0.0) continue;
      if (best[r][mask] == w[r][c] + best[r + 1][mask | (size_t{1} << c)]) {
        a.pairs.push_back({r, c, w[r][c]});
        mask |= size_t{1} << c;
        break;
      }
    }
  }
  return a;
}

// Hungarian method (shortest augmenting paths with potentials) on the
// square matrix of costs -w, padded with zeros.
Assignment AssignByHungarian(const WeightMatrix& w, int cols) {
  const int rows = static_cast<int>(w.size());
  const int n = std::max(rows, cols);
  auto cost = [&](int r, int c) {
    return (r < rows && c < cols) ? -w[r][c] : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match_col(n + 1, 0), way(n + 1, 0);
  for (int r = 1; r <= n; ++r) {
    match_col[0] = r;
    int c0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[c0] = true;
      const int r0 = match_col[c0];
      double delta = inf;
      int c1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = c0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          c1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match_col[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      c0 = c1;
    } while (match_col[c0] != 0);
    do {
      const int c1 = way[c0];
      match_col[c0] = match_col[c1];
      c0 = c1;
    } while (c0 != 0);
  }
  Assignment a;
  for (int c = 1; c <= n; ++c) {
    const int r = match_col[c] - 1;
    if (r < rows && c - 1 < cols && w[r][c - 1] > 0.0) {
      a.pairs.push_back({r, c - 1, w[r][c - 1]});
    }
  }
  std::sort(a.pairs.begin(), a.pairs.end(),
            [](const MatchedPair& x, const MatchedPair& y) {
              return x.pred < y.pred;
            });
  for (const auto& p : a.pairs) a.total += p.weight;
  return a;
}

constexpr int kDpMaxColumns = 8;

Assignment MaxWeightAssignment(const WeightMatrix& w, int cols) {
  const int rows = static_cast<int>(w.size());
  if (rows == 0 || cols == 0) return {};
  if (cols <= kDpMaxColumns) return AssignByDp(w, cols);
  if (rows <= kDpMaxColumns) {
    WeightMatrix t(cols, std::vector<double>(rows));
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) t[c][r] = w[r][c];
    }
    Assignment a = AssignByDp(t, rows);
    for (auto& p : a.pairs) std::swap(p.pred, p.gold);
    std::sort(a.pairs.begin(), a.pairs.end(),
              [](const MatchedPair& x, const MatchedPair& y) {
                return x.pred < y.pred;
              });
    return a;
  }
  return AssignByHungarian(w, cols);
}

template <typename Scorer>
SGF1Report ScoreCorpus(std::span<const SentGraph> gold,
                       std::span<const SentGraph> pred, Scorer&& score) {
  std::unordered_map<std::string, size_t> pred_index;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (!pred_index.emplace(pred[i].sent_id, i).second) {
      throw ValidationError("duplicate predicted sent_id " + pred[i].sent_id);
    }
  }
  std::set<std::string> gold_ids;
  for (const auto& g : gold) {
    if (!gold_ids.insert(g.sent_id).second) {
      throw ValidationError("duplicate gold sent_id " + g.sent_id);
    }
    if (!pred_index.contains(g.sent_id)) {
      throw ValidationError("sent_id " + g.sent_id + " has no prediction");
    }
  }
  if (gold.size() != pred.size()) {
    for (const auto& p : pred) {
      if (!gold_ids.contains(p.sent_id)) {
        throw ValidationError("predicted sent_id " + p.sent_id +
                              " is not in the gold set");
      }
    }
  }
  SGF1Report report;
  for (const auto& g : gold) {
    const SentGraph& p = pred[pred_index.at(g.sent_id)];
    SentenceScore s = score(g, p);
    s.sent_id = g.sent_id;
    report.weighted_tp_precision += s.weighted_tp_precision;
    report.weighted_tp_recall += s.weighted_tp_recall;
    report.n_predicted += s.n_predicted;
    report.n_gold += s.n_gold;
    report.per_sentence.push_back(std::move(s));
  }
  if (report.n_predicted == 0 && report.n_gold == 0) {
    report.precision = report.recall = report.f1 = 1.0;
    return report;
  }
  if (report.n_predicted > 0) {
    report.precision =
        report.weighted_tp_precision / static_cast<double>(report.n_predicted);
  }
  if (report.n_gold > 0) {
    report.recall =
        report.weighted_tp_recall / static_cast<double>(report.n_gold);
  }
  const double sum = report.precision + report.recall;
  report.f1 = sum > 0.0 ? 2.0 * report.precision * report.recall / sum : 0.0;
  return report;
}

}  // namespace

double SpanWeight(const TokenSet& pred, const TokenSet& gold,
                  Denominator denom) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  const double overlap = static_cast<double>(IntersectionSize(pred, gold));
  const auto& side = denom == Denominator::kPredicted ? pred : gold;
  return overlap / static_cast<double>(side.size());
}

double TupleWeight(const GraphTuple& pred, const GraphTuple& gold,
                   Denominator denom) {
  if (pred.polarity != gold.polarity) return 0.0;
  if (IntersectionSize(pred.expression, gold.expression) == 0) return 0.0;
  return (SpanWeight(pred.holder, gold.holder, denom) +
          SpanWeight(pred.target, gold.target, denom) +
          SpanWeight(pred.expression, gold.expression, denom)) /
         3.0;
}

SGF1Report SgF1(std::span<const SentGraph> gold,
                std::span<const SentGraph> pred) {
  return ScoreCorpus(gold, pred, [](const SentGraph& g, const SentGraph& p) {
    SentenceScore s;
    s.n_gold = static_cast<int>(g.tuples.size());
    s.n_predicted = static_cast<int>(p.tuples.size());
    for (Denominator denom : {Denominator::kPredicted, Denominator::kGold}) {
      WeightMatrix w(p.tuples.size(), std::vector<double>(g.tuples.size()));
      for (size_t i = 0; i < p.tuples.size(); ++i) {
        for (size_t j = 0; j < g.tuples.size(); ++j) {
          w[i][j] = TupleWeight(p.tuples[i], g.tuples[j], denom);
        }
      }
      Assignment a = MaxWeightAssignment(w, static_cast<int>(g.tuples.size()));
      if (denom == Denominator::kPredicted) {
        s.weighted_tp_precision = a.total;
        s.precision_pairs = std::move(a.pairs);
      } else {
        s.weighted_tp_recall = a.total;
        s.recall_pairs = std::move(a.pairs);
      }
    }
    return s;
  });
}

SGF1Report OracleSgF1(std::span<const SentGraph> gold,
                      std::span<const SentGraph> pred) {
  // Weights are recomputed from std::set intersections so the oracle shares
  // no span arithmetic with SgF1.
  auto span_weight = [](const TokenSet& p, const TokenSet& g, bool by_pred) {
    const std::set<int> ps(p.begin(), p.end());
    const std::set<int> gs(g.begin(), g.end());
    if (ps.empty() || gs.empty()) return ps.empty() && gs.empty() ? 1.0 : 0.0;
    int common = 0;
    for (int t : ps) common += static_cast<int>(gs.count(t));
    return static_cast<double>(common) /
           static_cast<double>(by_pred ? ps.size() : gs.size());
  };
  auto pair_weight = [&](const GraphTuple& p, const GraphTuple& g,
                         bool by_pred) {
    if (p.polarity != g.polarity) return 0.0;
    bool touch = false;
    for (int t : p.expression) {
      touch |= std::find(g.expression.begin(), g.expression.end(), t) !=
               g.expression.end();
    }
    if (!touch) return 0.0;
    return (span_weight(p.holder, g.holder, by_pred) +
            span_weight(p.target, g.target, by_pred) +
            span_weight(p.expression, g.expression, by_pred)) /
           3.0;
  };
  return ScoreCorpus(gold, pred, [&](const SentGraph& g, const SentGraph& p) {
    if (static_cast<int>(g.tuples.size()) > kOracleMaxTuples ||
        static_cast<int>(p.tuples.size()) > kOracleMaxTuples) {
      throw ValidationError("oracle supports at most " +
                            std::to_string(kOracleMaxTuples) +
                            " tuples per side");
    }
    SentenceScore s;
    s.n_gold = static_cast<int>(g.tuples.size());
    s.n_predicted = static_cast<int>(p.tuples.size());
    for (bool by_pred : {true, false}) {
      double best = 0.0;
      std::vector<MatchedPair> best_pairs;
      std::vector<int> assigned(p.tuples.size(), -1);
      std::vector<bool> used(g.tuples.size(), false);
      std::function<void(size_t)> enumerate = [&](size_t i) {
        if (i == p.tuples.size()) {
          double total = 0.0;
          std::vector<MatchedPair> pairs;
          for (size_t k = 0; k < assigned.size(); ++k) {
            if (assigned[k] < 0) continue;
            const double w =
                pair_weight(p.tuples[k], g.tuples[assigned[k]], by_pred);
            total += w;
            if (w > 0.0) {
              pairs.push_back({static_cast<int>(k), assigned[k], w});
            }
          }
          if (total > best) {
            best = total;
            best_pairs = std::move(pairs);
          }
          return;
        }
        enumerate(i + 1);
        for (size_t j = 0; j < g.tuples.size(); ++j) {
          if (used[j]) continue;
          used[j] = true;
          assigned[i] = static_cast<int>(j);
          enumerate(i + 1);
          assigned[i] = -1;
          used[j] = false;
        }
      };
      enumerate(0);
      if (by_pred) {
        s.weighted_tp_precision = best;
        s.precision_pairs = std::move(best_pairs);
      } else {
        s.weighted_tp_recall = best;
        s.recall_pairs = std::move(best_pairs);
      }
    }
    return s;
  });
}

GraphTuple ToGraphTuple(const OpinionTuple& t, const TokenizedSentence& sent) {
  const int shift = sent.none_prefixed ? 1 : 0;
  auto to_set = [&](TokenSpan span) {
    TokenSet s;
    for (int i = std::max(span.start, 1 + shift); i <= span.end; ++i) {
      s.push_back(i - shift);
    }
    return s;
  };
  return {to_set(t.holder), to_set(t.target), to_set(t.expression),
          t.polarity};
}

SentGraph DocumentGraph(const RawDocument& doc) {
  const TokenizedSentence sent = Tokenize(doc, false);
  auto to_set = [&](const Entity& e) {
    TokenSet s;
    for (const CharRange& r : e.offsets) {
      for (int t = 0; t < sent.size(); ++t) {
        const CharRange& tok = sent.token_char_spans[t];
        if (tok.begin < r.end && tok.end > r.begin) s.push_back(t + 1);
      }
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  };
  SentGraph g;
  g.sent_id = doc.sent_id;
  for (const auto& op : doc.opinions) {
    g.tuples.push_back({to_set(op.source), to_set(op.target),
                        to_set(op.expression), op.polarity});
  }
  return g;
}

}  // namespace ssa
