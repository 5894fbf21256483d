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

#ifndef SSA_CORPUS_HPP_
#define SSA_CORPUS_HPP_

// Shared-task annotation JSON: parsing, validation, whitespace tokenization,
// character-to-token alignment, null-instance subsampling, statistics and
// prediction serialization.
//
// Character ranges are stored internally as half-open UTF-8 byte ranges.
// OffsetMode only controls how "b:e" strings in files are interpreted.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssa/diagnostics.hpp"
#include "ssa/opinion.hpp"

namespace ssa {

enum class OffsetMode { kBytes, kCodepoints };

struct CharRange {
  int begin = 0;
  int end = 0;

  bool empty() const { return end <= begin; }
  bool operator==(const CharRange&) const = default;
};

// One annotated entity. An entity with no phrases is missing (e.g. an
// implicit holder).
struct Entity {
  std::vector<std::string> phrases;
  std::vector<CharRange> offsets;

  bool empty() const { return phrases.empty(); }
  bool operator==(const Entity&) const = default;
};

struct RawOpinion {
  Entity source;
  Entity target;
  Entity expression;
  Polarity polarity = Polarity::kNeutral;
  std::optional<std::string> intensity;

  bool operator==(const RawOpinion&) const = default;
};

struct RawDocument {
  std::string sent_id;
  std::string text;
  std::vector<RawOpinion> opinions;

  bool is_null() const { return opinions.empty(); }
  bool operator==(const RawDocument&) const = default;
};

inline constexpr std::string_view kNoneToken = "None";

struct TokenizedSentence {
  std::string sent_id;
  std::vector<std::string> tokens;
  // Aligned with tokens. The None prefix token has an empty range {0, 0};
  // every other range is in original_text coordinates.
  std::vector<CharRange> token_char_spans;
  bool none_prefixed = false;
  std::string original_text;

  int size() const { return static_cast<int>(tokens.size()); }
  // Index of the first real token (1 or 2).
  int first_word_index() const { return none_prefixed ? 2 : 1; }
};

struct CorpusStats {
  int64_t n_sentences = 0;
  int64_t n_null = 0;
  double null_fraction = 0.0;
  int64_t n_tuples = 0;
  std::map<int, int64_t> token_length_histogram;
};

// Throws ParseError on malformed JSON and ValidationError on contract
// violations (phrase/substring mismatch, unknown polarity, bad offsets,
// duplicate sent_id).
std::vector<RawDocument> ParseCorpus(std::string_view bytes,
                                     OffsetMode mode = OffsetMode::kBytes);

std::string SerializeCorpus(std::span<const RawDocument> docs,
                            OffsetMode mode = OffsetMode::kBytes);

std::vector<RawDocument> ReadCorpusFile(const std::string& path,
                                        OffsetMode mode = OffsetMode::kBytes);

TokenizedSentence Tokenize(const RawDocument& doc, bool add_none_prefix);

struct Alignment {
  TokenSpan span;
  bool snapped = false;
};

// Minimal token range covering every non-space character of `range`.
// Boundaries inside a token snap outward and set `snapped`.
Alignment AlignSpan(const TokenizedSentence& sent, CharRange range);

// Token span of an entity; fragments collapse to their covering span, and a
// missing entity maps to the None prefix (1, 1).
TokenSpan EntityToSpan(const TokenizedSentence& sent, const Entity& entity,
                       Diagnostics* diagnostics);

std::vector<OpinionTuple> DocumentTuples(const RawDocument& doc,
                                         const TokenizedSentence& sent,
                                         Diagnostics* diagnostics);

std::vector<RawDocument> SubsampleNulls(std::span<const RawDocument> docs,
                                        double target_null_fraction,
                                        uint64_t seed);

// Number of null documents kept when `n_non_null` documents are retained.
int64_t NullBudget(int64_t n_non_null, int64_t n_null,
                   double target_null_fraction);

CorpusStats ComputeStats(std::span<const RawDocument> docs);

std::string LengthHistogramCsv(const CorpusStats& stats);

// Converts token spans back to phrases and offsets. A span on the None
// prefix serializes as an empty entity. Intensity is not written.
std::string WritePredictions(
    std::span<const TokenizedSentence> sents,
    std::span<const std::vector<OpinionTuple>> tuples,
    OffsetMode mode = OffsetMode::kBytes);

// Entity covering `span` of `sent` (empty for the None prefix).
Entity SpanToEntity(const TokenizedSentence& sent, TokenSpan span);

// Maps between byte offsets and code-point offsets of a UTF-8 string.
int ByteToCodepoint(std::string_view text, int byte_offset);
int CodepointToByte(std::string_view text, int codepoint_offset);

}  // namespace ssa

#endif  // SSA_CORPUS_HPP_
