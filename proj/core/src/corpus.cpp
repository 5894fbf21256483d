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

#include "ssa/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ssa {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kEntityKeys[] = {"Source", "Target", "Polar_expression"};

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsContinuationByte(unsigned char c) { return (c & 0xC0) == 0x80; }

CharRange ParseOffset(const std::string& s, const std::string& where) {
  const auto colon = s.find(':');
  CharRange r;
  auto parse_int = [&](std::string_view part, int* out) {
    const auto* first = part.data();
    const auto* last = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(first, last, *out);
    return ec == std::errc() && ptr == last && !part.empty();
  };
  if (colon == std::string::npos ||
      !parse_int(std::string_view(s).substr(0, colon), &r.begin) ||
      !parse_int(std::string_view(s).substr(colon + 1), &r.end)) {
    throw ValidationError(where + ": malformed offset \"" + s + "\"");
  }
  return r;
}

Entity ParseEntity(const json& value, const std::string& text,
                   OffsetMode mode, const std::string& where) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_array() ||
      !value[1].is_array()) {
    throw ValidationError(where + ": expected [[phrases], [offsets]]");
  }
  if (value[0].size() != value[1].size()) {
    throw ValidationError(where + ": phrase and offset lists differ in length");
  }
  Entity entity;
  for (size_t i = 0; i < value[0].size(); ++i) {
    if (!value[0][i].is_string() || !value[1][i].is_string()) {
      throw ValidationError(where + ": phrases and offsets must be strings");
    }
    const auto phrase = value[0][i].get<std::string>();
    CharRange r = ParseOffset(value[1][i].get<std::string>(), where);
    if (mode == OffsetMode::kCodepoints) {
      r.begin = CodepointToByte(text, r.begin);
      r.end = CodepointToByte(text, r.end);
    }
    if (r.begin < 0 || r.begin >= r.end ||
        r.end > static_cast<int>(text.size())) {
      throw ValidationError(where + ": offset out of range \"" +
                            value[1][i].get<std::string>() + "\"");
    }
    if (text.compare(r.begin, r.end - r.begin, phrase) != 0) {
      throw ValidationError(where + ": phrase \"" + phrase +
                            "\" does not match text at offset \"" +
                            value[1][i].get<std::string>() + "\"");
    }
    entity.phrases.push_back(phrase);
    entity.offsets.push_back(r);
  }
  return entity;
}

std::string FormatOffset(const std::string& text, CharRange r,
                         OffsetMode mode) {
  if (mode == OffsetMode::kCodepoints) {
    r.begin = ByteToCodepoint(text, r.begin);
    r.end = ByteToCodepoint(text, r.end);
  }
  return std::to_string(r.begin) + ":" + std::to_string(r.end);
}

ordered_json EntityJson(const Entity& e, const std::string& text,
                        OffsetMode mode) {
  ordered_json phrases = ordered_json::array();
  ordered_json offsets = ordered_json::array();
  for (size_t i = 0; i < e.phrases.size(); ++i) {
    phrases.push_back(e.phrases[i]);
    offsets.push_back(FormatOffset(text, e.offsets[i], mode));
  }
  return ordered_json::array({phrases, offsets});
}

ordered_json DocumentJson(const RawDocument& doc, OffsetMode mode) {
  ordered_json out;
  out["sent_id"] = doc.sent_id;
  out["text"] = doc.text;
  out["opinions"] = ordered_json::array();
  for (const auto& op : doc.opinions) {
    ordered_json o;
    o["Source"] = EntityJson(op.source, doc.text, mode);
    o["Target"] = EntityJson(op.target, doc.text, mode);
    o["Polar_expression"] = EntityJson(op.expression, doc.text, mode);
    o["Polarity"] = std::string(PolarityName(op.polarity));
    if (op.intensity) o["Intensity"] = *op.intensity;
    out["opinions"].push_back(std::move(o));
  }
  return out;
}

std::string JoinDocuments(const std::vector<ordered_json>& docs) {
  if (docs.empty()) return "[]\n";
  std::string out = "[\n";
  for (size_t i = 0; i < docs.size(); ++i) {
    out += docs[i].dump(-1, ' ', false, json::error_handler_t::replace);
    out += i + 1 < docs.size() ? ",\n" : "\n";
  }
  out += "]\n";
  return out;
}

void CheckSpan(const TokenizedSentence& sent, TokenSpan span) {
  if (span.start < 1 || span.start > span.end || span.end > sent.size()) {
    throw ValidationError(sent.sent_id + ": token span (" +
                          std::to_string(span.start) + "," +
                          std::to_string(span.end) + ") out of range for " +
                          std::to_string(sent.size()) + " tokens");
  }
}

}  // namespace

int ByteToCodepoint(std::string_view text, int byte_offset) {
  int cp = 0;
  const int limit = std::min<int>(byte_offset, text.size());
  for (int i = 0; i < limit; ++i) {
    if (!IsContinuationByte(static_cast<unsigned char>(text[i]))) ++cp;
  }
  return cp + std::max(0, byte_offset - static_cast<int>(text.size()));
}

int CodepointToByte(std::string_view text, int codepoint_offset) {
  if (codepoint_offset < 0) return -1;
  int cp = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (IsContinuationByte(static_cast<unsigned char>(text[i]))) continue;
    if (cp == codepoint_offset) return static_cast<int>(i);
    ++cp;
  }
  // Offsets past the end keep their excess so range checks reject them.
  return static_cast<int>(text.size()) + (codepoint_offset - cp);
}

std::vector<RawDocument> ParseCorpus(std::string_view bytes, OffsetMode mode) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
  if (!root.is_array()) throw ValidationError("corpus must be a JSON array");

  std::vector<RawDocument> docs;
  docs.reserve(root.size());
  std::set<std::string> seen;
  for (size_t d = 0; d < root.size(); ++d) {
    const json& obj = root[d];
    if (!obj.is_object() || !obj.contains("sent_id") ||
        !obj.contains("text") || !obj.contains("opinions")) {
      throw ValidationError("document " + std::to_string(d) +
                            ": expected keys sent_id, text, opinions");
    }
    RawDocument doc;
    if (!obj["sent_id"].is_string() || !obj["text"].is_string() ||
        !obj["opinions"].is_array()) {
      throw ValidationError("document " + std::to_string(d) +
                            ": sent_id/text must be strings, opinions a list");
    }
    doc.sent_id = obj["sent_id"].get<std::string>();
    doc.text = obj["text"].get<std::string>();
    if (doc.sent_id.empty()) {
      throw ValidationError("document " + std::to_string(d) +
                            ": empty sent_id");
    }
    if (!seen.insert(doc.sent_id).second) {
      throw ValidationError(doc.sent_id + ": duplicate sent_id");
    }
    int o = 0;
    for (const json& op : obj["opinions"]) {
      const std::string where = doc.sent_id + " opinion " + std::to_string(o);
      if (!op.is_object()) throw ValidationError(where + ": not an object");
      RawOpinion raw;
      Entity* slots[] = {&raw.source, &raw.target, &raw.expression};
      for (int k = 0; k < 3; ++k) {
        if (!op.contains(kEntityKeys[k])) {
          throw ValidationError(where + ": missing " + kEntityKeys[k]);
        }
        *slots[k] = ParseEntity(op[kEntityKeys[k]], doc.text, mode,
                                where + " " + kEntityKeys[k]);
      }
      if (!op.contains("Polarity") || !op["Polarity"].is_string()) {
        throw ValidationError(where + ": missing Polarity");
      }
      const auto pol_name = op["Polarity"].get<std::string>();
      const auto pol = PolarityFromName(pol_name);
      if (!pol) {
        throw ValidationError(where + ": unknown polarity \"" + pol_name +
                              "\"");
      }
      raw.polarity = *pol;
      if (op.contains("Intensity") && op["Intensity"].is_string()) {
        raw.intensity = op["Intensity"].get<std::string>();
      }
      doc.opinions.push_back(std::move(raw));
      ++o;
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::string SerializeCorpus(std::span<const RawDocument> docs,
                            OffsetMode mode) {
  std::vector<ordered_json> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(DocumentJson(doc, mode));
  return JoinDocuments(out);
}

std::vector<RawDocument> ReadCorpusFile(const std::string& path,
                                        OffsetMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open corpus file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ParseCorpus(ss.str(), mode);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.byte_position());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

TokenizedSentence Tokenize(const RawDocument& doc, bool add_none_prefix) {
  TokenizedSentence sent;
  sent.sent_id = doc.sent_id;
  sent.original_text = doc.text;
  sent.none_prefixed = add_none_prefix;
  if (add_none_prefix) {
    sent.tokens.emplace_back(kNoneToken);
    sent.token_char_spans.push_back({0, 0});
  }
  const std::string& text = doc.text;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    if (i >= text.size()) break;
    size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    sent.tokens.push_back(text.substr(i, j - i));
    sent.token_char_spans.push_back(
        {static_cast<int>(i), static_cast<int>(j)});
    i = j;
  }
  return sent;
}

Alignment AlignSpan(const TokenizedSentence& sent, CharRange range) {
  if (range.empty()) {
    throw ValidationError(sent.sent_id + ": empty character range");
  }
  if (range.begin < 0 ||
      range.end > static_cast<int>(sent.original_text.size())) {
    throw ValidationError(sent.sent_id + ": character range out of bounds");
  }
  int first = -1;
  int last = -1;
  for (int t = sent.first_word_index() - 1; t < sent.size(); ++t) {
    const CharRange& tok = sent.token_char_spans[t];
    if (tok.begin < range.end && tok.end > range.begin) {
      if (first < 0) first = t;
      last = t;
    }
  }
  if (first < 0) {
    throw ValidationError(sent.sent_id + ": character range " +
                          std::to_string(range.begin) + ":" +
                          std::to_string(range.end) +
                          " covers only whitespace");
  }
  Alignment a;
  a.span = {first + 1, last + 1};
  a.snapped = sent.token_char_spans[first].begin < range.begin ||
              sent.token_char_spans[last].end > range.end;
  return a;
}

TokenSpan EntityToSpan(const TokenizedSentence& sent, const Entity& entity,
                       Diagnostics* diagnostics) {
  if (entity.empty()) {
    if (!sent.none_prefixed) {
      throw ValidationError(sent.sent_id +
                            ": missing entity needs the None prefix");
    }
    return {1, 1};
  }
  TokenSpan span{0, 0};
  bool snapped = false;
  for (size_t i = 0; i < entity.offsets.size(); ++i) {
    const Alignment a = AlignSpan(sent, entity.offsets[i]);
    snapped |= a.snapped;
    if (i == 0) {
      span = a.span;
    } else {
      span.start = std::min(span.start, a.span.start);
      span.end = std::max(span.end, a.span.end);
    }
  }
  if (diagnostics) {
    if (snapped) {
      diagnostics->push_back({DiagCode::kSpanSnapped,
                              sent.sent_id + ": offsets of \"" +
                                  entity.phrases.front() +
                                  "\" cut a token; snapped outward"});
    }
    if (entity.offsets.size() > 1) {
      diagnostics->push_back(
          {DiagCode::kMultiFragmentCollapsed,
           sent.sent_id + ": " + std::to_string(entity.offsets.size()) +
               " fragments collapsed to one covering span"});
    }
  }
  return span;
}

std::vector<OpinionTuple> DocumentTuples(const RawDocument& doc,
                                         const TokenizedSentence& sent,
                                         Diagnostics* diagnostics) {
  std::vector<OpinionTuple> tuples;
  tuples.reserve(doc.opinions.size());
  for (const auto& op : doc.opinions) {
    OpinionTuple t;
    t.holder = EntityToSpan(sent, op.source, diagnostics);
    t.target = EntityToSpan(sent, op.target, diagnostics);
    t.expression = EntityToSpan(sent, op.expression, diagnostics);
    t.polarity = op.polarity;
    tuples.push_back(t);
  }
  return tuples;
}

int64_t NullBudget(int64_t n_non_null, int64_t n_null,
                   double target_null_fraction) {
  const double f = target_null_fraction;
  if (f >= 1.0 || n_null == 0) return n_null;
  const int64_t total = n_non_null + n_null;
  if (static_cast<double>(n_null) <= f * static_cast<double>(total)) {
    return n_null;
  }
  if (f <= 0.0) return 0;
  constexpr double kSlack = 1e-9;
  auto fits = [&](int64_t k) {
    return static_cast<double>(k) <=
           f * static_cast<double>(n_non_null + k) + kSlack;
  };
  auto k = static_cast<int64_t>(f * static_cast<double>(n_non_null) / (1 - f));
  k = std::clamp<int64_t>(k, 0, n_null);
  while (k + 1 <= n_null && fits(k + 1)) ++k;
  while (k > 0 && !fits(k)) --k;
  return k;
}

std::vector<RawDocument> SubsampleNulls(std::span<const RawDocument> docs,
                                        double target_null_fraction,
                                        uint64_t seed) {
  std::vector<size_t> nulls;
  for (size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].is_null()) nulls.push_back(i);
  }
  const int64_t n_null = static_cast<int64_t>(nulls.size());
  const int64_t keep = NullBudget(
      static_cast<int64_t>(docs.size()) - n_null, n_null, target_null_fraction);
  if (keep == n_null) return {docs.begin(), docs.end()};

  // Partial Fisher-Yates with an explicit bounded draw so the selection is
  // identical across standard library implementations.
  std::mt19937_64 rng(seed);
  auto bounded = [&rng](uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    return x % n;
  };
  for (int64_t i = 0; i < keep; ++i) {
    const auto j = i + static_cast<int64_t>(bounded(n_null - i));
    std::swap(nulls[i], nulls[j]);
  }
  std::vector<bool> dropped(docs.size(), false);
  for (int64_t i = keep; i < n_null; ++i) dropped[nulls[i]] = true;

  std::vector<RawDocument> out;
  out.reserve(docs.size() - (n_null - keep));
  for (size_t i = 0; i < docs.size(); ++i) {
    if (!dropped[i]) out.push_back(docs[i]);
  }
  return out;
}

CorpusStats ComputeStats(std::span<const RawDocument> docs) {
  CorpusStats stats;
  for (const auto& doc : docs) {
    ++stats.n_sentences;
    if (doc.is_null()) ++stats.n_null;
    stats.n_tuples += static_cast<int64_t>(doc.opinions.size());
    ++stats.token_length_histogram[Tokenize(doc, false).size()];
  }
  if (stats.n_sentences > 0) {
    stats.null_fraction = static_cast<double>(stats.n_null) /
                          static_cast<double>(stats.n_sentences);
  }
  return stats;
}

std::string LengthHistogramCsv(const CorpusStats& stats) {
  std::string out = "length,count\n";
  for (const auto& [length, count] : stats.token_length_histogram) {
    out += std::to_string(length) + "," + std::to_string(count) + "\n";
  }
  return out;
}

Entity SpanToEntity(const TokenizedSentence& sent, TokenSpan span) {
  CheckSpan(sent, span);
  Entity e;
  if (sent.none_prefixed) {
    if (span.end == 1) return e;
    span.start = std::max(span.start, 2);
  }
  const CharRange r{sent.token_char_spans[span.start - 1].begin,
                    sent.token_char_spans[span.end - 1].end};
  e.phrases.push_back(sent.original_text.substr(r.begin, r.end - r.begin));
  e.offsets.push_back(r);
  return e;
}

std::string WritePredictions(std::span<const TokenizedSentence> sents,
                             std::span<const std::vector<OpinionTuple>> tuples,
                             OffsetMode mode) {
  if (sents.size() != tuples.size()) {
    throw ValidationError("prediction count does not match sentence count");
  }
  std::vector<ordered_json> out;
  out.reserve(sents.size());
  for (size_t i = 0; i < sents.size(); ++i) {
    RawDocument doc;
    doc.sent_id = sents[i].sent_id;
    doc.text = sents[i].original_text;
    for (const auto& t : tuples[i]) {
      RawOpinion op;
      op.source = SpanToEntity(sents[i], t.holder);
      op.target = SpanToEntity(sents[i], t.target);
      op.expression = SpanToEntity(sents[i], t.expression);
      op.polarity = t.polarity;
      doc.opinions.push_back(std::move(op));
    }
    out.push_back(DocumentJson(doc, mode));
  }
  return JoinDocuments(out);
}

}  // namespace ssa
