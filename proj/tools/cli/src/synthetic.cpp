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

#include "ssa/cli/synthetic.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <string_view>

namespace ssa::cli {
namespace {

constexpr std::array<std::string_view, 8> kHolders = {
    "I", "my wife", "John", "the critic", "we", "our guide", "my friend",
    "Mary"};
constexpr std::array<std::string_view, 12> kTargets = {
    "this book", "the food",     "the room",     "the staff",
    "this hotel", "the service", "the movie",    "the camera",
    "the breakfast", "the location", "the price", "the screen"};
constexpr std::array<std::string_view, 5> kPositive = {
    "great", "excellent", "wonderful", "amazing", "lovely"};
constexpr std::array<std::string_view, 5> kNegative = {
    "terrible", "awful", "poor", "disappointing", "dirty"};
constexpr std::array<std::string_view, 3> kNeutral = {"okay", "average",
                                                      "acceptable"};
constexpr std::array<std::string_view, 4> kDays = {"Monday", "Tuesday",
                                                   "Friday", "Sunday"};
constexpr std::array<std::string_view, 3> kCounts = {"two", "three", "four"};

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  template <typename Array>
  std::string_view Pick(const Array& a) {
    return a[Below(a.size())];
  }

 private:
  std::mt19937_64 engine_;
};

// Appends words separated by single spaces and records byte ranges.
class SentenceBuilder {
 public:
  CharRange Append(std::string_view piece) {
    if (!text_.empty()) text_ += ' ';
    const int begin = static_cast<int>(text_.size());
    text_ += piece;
    return {begin, static_cast<int>(text_.size())};
  }
  // Range covering two previously appended ranges.
  static CharRange Join(CharRange a, CharRange b) { return {a.begin, b.end}; }

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

struct Adjective {
  std::string_view word;
  Polarity polarity;
};

Adjective PickAdjective(Rng& rng) {
  switch (rng.Below(5)) {
    case 0:
    case 1:
      return {rng.Pick(kPositive), Polarity::kPositive};
    case 2:
    case 3:
      return {rng.Pick(kNegative), Polarity::kNegative};
    default:
      return {rng.Pick(kNeutral), Polarity::kNeutral};
  }
}

Entity MakeEntity(const std::string& text, std::optional<CharRange> r) {
  Entity e;
  if (!r) return e;
  e.phrases.push_back(text.substr(r->begin, r->end - r->begin));
  e.offsets.push_back(*r);
  return e;
}

struct Pending {
  std::optional<CharRange> holder, target, expression;
  Polarity polarity;
};

RawDocument Finish(std::string sent_id, const SentenceBuilder& b,
                   const std::vector<Pending>& tuples) {
  RawDocument doc;
  doc.sent_id = std::move(sent_id);
  doc.text = b.text();
  for (const auto& p : tuples) {
    RawOpinion op;
    op.source = MakeEntity(doc.text, p.holder);
    op.target = MakeEntity(doc.text, p.target);
    op.expression = MakeEntity(doc.text, p.expression);
    op.polarity = p.polarity;
    op.intensity = "Standard";
    doc.opinions.push_back(std::move(op));
  }
  return doc;
}

RawDocument OpinionSentence(Rng& rng, std::string sent_id) {
  SentenceBuilder b;
  std::vector<Pending> tuples;
  switch (rng.Below(10)) {
    case 0: {  // H would not suggest T .
      const CharRange h = b.Append(rng.Pick(kHolders));
      const CharRange e1 = b.Append("would");
      b.Append("not");
      const CharRange e2 = b.Append("suggest");
      const CharRange t = b.Append(rng.Pick(kTargets));
      b.Append(".");
      tuples.push_back({h, t, SentenceBuilder::Join(e1, e2),
                        Polarity::kNegative});
      break;
    }
    case 1: {  // H really loved T .
      const CharRange h = b.Append(rng.Pick(kHolders));
      const CharRange e1 = b.Append("really");
      const CharRange e2 = b.Append("loved");
      const CharRange t = b.Append(rng.Pick(kTargets));
      b.Append(".");
      tuples.push_back({h, t, SentenceBuilder::Join(e1, e2),
                        Polarity::kPositive});
      break;
    }
    case 2: {  // H hated T .
      const CharRange h = b.Append(rng.Pick(kHolders));
      const CharRange e = b.Append("hated");
      const CharRange t = b.Append(rng.Pick(kTargets));
      b.Append(".");
      tuples.push_back({h, t, e, Polarity::kNegative});
      break;
    }
    case 3: {  // T is A .
      const Adjective a = PickAdjective(rng);
      const CharRange t = b.Append(rng.Pick(kTargets));
      b.Append("is");
      const CharRange e = b.Append(a.word);
      b.Append(".");
      tuples.push_back({std::nullopt, t, e, a.polarity});
      break;
    }
    case 4: {  // T was very A .
      const Adjective a = PickAdjective(rng);
      const CharRange t = b.Append(rng.Pick(kTargets));
      b.Append("was");
      const CharRange e1 = b.Append("very");
      const CharRange e2 = b.Append(a.word);
      b.Append(".");
      tuples.push_back(
          {std::nullopt, t, SentenceBuilder::Join(e1, e2), a.polarity});
      break;
    }
    case 5: {  // H thinks T is A .
      const Adjective a = PickAdjective(rng);
      const CharRange h = b.Append(rng.Pick(kHolders));
      b.Append("thinks");
      const CharRange t = b.Append(rng.Pick(kTargets));
      b.Append("is");
      const CharRange e = b.Append(a.word);
      b.Append(".");
      tuples.push_back({h, t, e, a.polarity});
      break;
    }
    case 6: {  // T is A but T2 is B .
      const Adjective a = PickAdjective(rng);
      const Adjective c = PickAdjective(rng);
      const CharRange t1 = b.Append(rng.Pick(kTargets));
      b.Append("is");
      const CharRange e1 = b.Append(a.word);
      b.Append("but");
      const CharRange t2 = b.Append(rng.Pick(kTargets));
      b.Append("is");
      const CharRange e2 = b.Append(c.word);
      b.Append(".");
      tuples.push_back({std::nullopt, t1, e1, a.polarity});
      tuples.push_back({std::nullopt, t2, e2, c.polarity});
      break;
    }
    case 7: {  // H said T was A and T2 was B .
      const Adjective a = PickAdjective(rng);
      const Adjective c = PickAdjective(rng);
      const CharRange h = b.Append(rng.Pick(kHolders));
      b.Append("said");
      const CharRange t1 = b.Append(rng.Pick(kTargets));
      b.Append("was");
      const CharRange e1 = b.Append(a.word);
      b.Append("and");
      const CharRange t2 = b.Append(rng.Pick(kTargets));
      b.Append("was");
      const CharRange e2 = b.Append(c.word);
      b.Append(".");
      tuples.push_back({h, t1, e1, a.polarity});
      tuples.push_back({h, t2, e2, c.polarity});
      break;
    }
    case 8: {  // H felt happy / disappointed / indifferent .
      static constexpr std::array<Adjective, 3> kFeelings = {
          Adjective{"happy", Polarity::kPositive},
          Adjective{"disappointed", Polarity::kNegative},
          Adjective{"indifferent", Polarity::kNeutral}};
      const Adjective f = kFeelings[rng.Below(kFeelings.size())];
      const CharRange h = b.Append(rng.Pick(kHolders));
      b.Append("felt");
      const CharRange e = b.Append(f.word);
      b.Append(".");
      tuples.push_back({h, std::nullopt, e, f.polarity});
      break;
    }
    default: {  // we found T A .
      const Adjective a = PickAdjective(rng);
      b.Append("we");
      b.Append("found");
      const CharRange t = b.Append(rng.Pick(kTargets));
      const CharRange e = b.Append(a.word);
      b.Append(".");
      tuples.push_back({std::nullopt, t, e, a.polarity});
      break;
    }
  }
  return Finish(std::move(sent_id), b, tuples);
}

RawDocument NullSentence(Rng& rng, std::string sent_id) {
  SentenceBuilder b;
  switch (rng.Below(4)) {
    case 0:
      b.Append(rng.Pick(kHolders));
      b.Append("visited");
      b.Append(rng.Pick(kTargets));
      b.Append("yesterday");
      break;
    case 1:
      b.Append(rng.Pick(kTargets));
      b.Append("arrived");
      b.Append("on");
      b.Append(rng.Pick(kDays));
      break;
    case 2:
      b.Append("we");
      b.Append("stayed");
      b.Append("for");
      b.Append(rng.Pick(kCounts));
      b.Append("nights");
      break;
    default:
      b.Append(rng.Pick(kHolders));
      b.Append("asked");
      b.Append("about");
      b.Append(rng.Pick(kTargets));
      break;
  }
  b.Append(".");
  return Finish(std::move(sent_id), b, {});
}

}  // namespace

std::vector<RawDocument> GenerateSyntheticCorpus(const SynthConfig& config) {
  Rng rng(config.seed);
  const int n = std::max(0, config.n_sentences);
  const int n_null = std::clamp(
      static_cast<int>(std::lround(config.null_fraction * n)), 0, n);
  std::vector<bool> is_null(n, false);
  for (int i = 0; i < n_null; ++i) is_null[i] = true;
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.Below(static_cast<uint64_t>(i) + 1));
    std::swap(is_null[i], is_null[j]);
  }
  std::vector<RawDocument> docs;
  docs.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::string id =
        "synth-" + std::to_string(config.seed) + "-" + std::to_string(i);
    docs.push_back(is_null[i] ? NullSentence(rng, std::move(id))
                              : OpinionSentence(rng, std::move(id)));
  }
  return docs;
}

}  // namespace ssa::cli
