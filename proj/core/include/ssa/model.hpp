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

#ifndef SSA_MODEL_HPP_
#define SSA_MODEL_HPP_

// Encoder-decoder transformer with a pointer/class output head.
//
// The encoder reads the token ids of a (None-prefixed) sentence. The decoder
// reads BOS followed by the history converted back to embeddings: a pointer
// index becomes the word embedding of the token it points at, EOS and the
// polarity classes use dedicated embeddings. Step t scores every index of
// the IndexSpace:
//
//   pointer i : h_t . (alpha * He_i + (1 - alpha) * E[x_i])
//   EOS/class : h_t . special_k
//
// Pre-norm residual blocks, GELU feed-forward, sinusoidal positions.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ssa/autodiff.hpp"
#include "ssa/corpus.hpp"

namespace ssa {

struct ModelConfig {
  int d_model = 64;
  int n_layers_enc = 2;
  int n_layers_dec = 2;
  int n_heads = 4;
  int d_ff = 128;
  int vocab_size = 0;
  int max_len = 256;
  double dropout = 0.0;
  uint64_t seed = 1;

  // Throws ValidationError.
  void Validate() const;
  bool operator==(const ModelConfig&) const = default;
};

class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr int kBos = 1;

  Vocabulary();

  int Add(std::string_view token);
  int Id(std::string_view token) const;
  const std::string& Token(int id) const { return tokens_.at(id); }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::vector<int> Encode(std::span<const std::string> tokens) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Types in order of first appearance.
Vocabulary BuildVocabulary(std::span<const TokenizedSentence> sents);

class Parameters {
 public:
  struct Norm {
    int gain, bias;
  };
  struct Attention {
    int wq, bq, wk, wv, bv, wo, bo;
  };
  struct FeedForward {
    int w1, b1, w2, b2;
  };
  struct EncoderLayer {
    Norm ln_attn;
    Attention attn;
    Norm ln_ff;
    FeedForward ff;
  };
  struct DecoderLayer {
    Norm ln_self;
    Attention self_attn;
    Norm ln_cross;
    Attention cross_attn;
    Norm ln_ff;
    FeedForward ff;
  };

  // Allocates every tensor for `config`, all zero.
  explicit Parameters(const ModelConfig& config);

  // Weights uniform(-range, range); norm gains 1, norm biases 0, alpha 0.5.
  void InitUniform(double range, uint64_t seed);
  void SetZero();
  void ZeroGrad() { set_.ZeroGrad(); }

  const ModelConfig& config() const { return config_; }
  ad::ParameterSet& set() { return set_; }
  const ad::ParameterSet& set() const { return set_; }
  const ad::Tensor& at(int id) const { return set_.at(id); }

  int embedding() const { return embedding_; }
  int eos_embedding() const { return eos_embedding_; }
  int class_embedding() const { return class_embedding_; }
  int alpha() const { return alpha_; }
  const std::vector<EncoderLayer>& encoder() const { return encoder_; }
  const std::vector<DecoderLayer>& decoder() const { return decoder_; }
  Norm encoder_norm() const { return encoder_norm_; }
  Norm decoder_norm() const { return decoder_norm_; }

 private:
  ModelConfig config_;
  ad::ParameterSet set_;
  int embedding_, eos_embedding_, class_embedding_, alpha_;
  std::vector<EncoderLayer> encoder_;
  std::vector<DecoderLayer> decoder_;
  Norm encoder_norm_, decoder_norm_;
};

struct EncoderState {
  ad::Matrix states;  // n x d
  std::vector<int> token_ids;

  int n_tokens() const { return static_cast<int>(token_ids.size()); }
};

struct DecoderStep {
  ad::Vector hidden;  // d
  ad::Vector logits;  // n + 4, entry i-1 scores index i
  ad::Vector probs;
};

// Eval-mode forward passes (no dropout, no recording).
EncoderState Encode(std::span<const int> token_ids, const Parameters& params,
                    const ModelConfig& config);
DecoderStep RunDecoderStep(const EncoderState& enc,
                           std::span<const int> history,
                           const Parameters& params, const ModelConfig& config);
// -sum_t log P_t(gold_t) with the gold prefix as history.
double SequenceNll(std::span<const int> token_ids, std::span<const int> gold,
                   const Parameters& params, const ModelConfig& config);

// A recorded teacher-forced forward pass awaiting Backward().
class LossContext {
 public:
  double loss() const { return loss_value_; }
  // Accumulates d(loss)/d(theta) into params' gradient buffers.
  void Backward(Parameters* params);

 private:
  friend LossContext ForwardLoss(std::span<const int>, std::span<const int>,
                                 const Parameters&, const ModelConfig&,
                                 std::mt19937_64*);
  LossContext() : graph_(std::make_unique<ad::Graph>(true)) {}

  std::unique_ptr<ad::Graph> graph_;
  ad::Var loss_;
  double loss_value_ = 0.0;
};

// `dropout_rng` null selects eval mode.
LossContext ForwardLoss(std::span<const int> token_ids,
                        std::span<const int> gold, const Parameters& params,
                        const ModelConfig& config,
                        std::mt19937_64* dropout_rng = nullptr);

}  // namespace ssa

#endif  // SSA_MODEL_HPP_
