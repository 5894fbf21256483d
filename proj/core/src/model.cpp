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

#include "ssa/model.hpp"

#include <cmath>

#include "ssa/codec.hpp"

namespace ssa {
namespace {

using ad::Graph;
using ad::Matrix;
using ad::Var;

Matrix SinusoidalPositions(int rows, int d) {
  Matrix pe(rows, d);
  for (int pos = 0; pos < rows; ++pos) {
    for (int i = 0; i < d; i += 2) {
      const double freq = std::pow(10000.0, -static_cast<double>(i) / d);
      pe(pos, i) = std::sin(pos * freq);
      if (i + 1 < d) pe(pos, i + 1) = std::cos(pos * freq);
    }
  }
  return pe;
}

void CheckTokens(std::span<const int> ids, const ModelConfig& config) {
  if (ids.empty()) throw ValidationError("empty encoder input");
  if (static_cast<int>(ids.size()) > config.max_len) {
    throw ValidationError("encoder input of " + std::to_string(ids.size()) +
                          " tokens exceeds max_len " +
                          std::to_string(config.max_len));
  }
  for (int id : ids) {
    if (id < 0 || id >= config.vocab_size) {
      throw ValidationError("token id " + std::to_string(id) +
                            " outside vocabulary");
    }
  }
}

void CheckHistory(std::span<const int> history, int n,
                  const ModelConfig& config) {
  const IndexSpace space{n};
  for (int y : history) {
    if (y < 1 || y > space.max_index()) {
      throw ValidationError("history index " + std::to_string(y) +
                            " outside 1.." + std::to_string(space.max_index()));
    }
  }
  if (static_cast<int>(history.size()) + 1 > config.max_len) {
    throw ValidationError("decoder history exceeds max_len");
  }
}

// Builds the network on a Graph. Parameter nodes are created once per
// tensor and reused.
class Network {
 public:
  Network(Graph& g, const Parameters& p, const ModelConfig& c,
          std::mt19937_64* rng)
      : g_(g), p_(p), c_(c), rng_(rng), cache_(p.set().size()) {
    if (p.config() != c) {
      throw ValidationError("parameters were built for a different config");
    }
  }

  Var Param(int id) {
    if (!cache_[id].valid()) cache_[id] = g_.Param(p_.at(id));
    return cache_[id];
  }

  Var Encode(std::span<const int> ids) {
    Var x = Embed(g_.Gather(p_.at(p_.embedding()), ids));
    for (const auto& layer : p_.encoder()) {
      Var h = Norm(x, layer.ln_attn);
      x = g_.Add(x, Drop(AttentionBlock(h, h, layer.attn, false)));
      h = Norm(x, layer.ln_ff);
      x = g_.Add(x, Drop(FeedForward(h, layer.ff)));
    }
    return Norm(x, p_.encoder_norm());
  }

  // Decoder states for inputs [BOS, convert(history)...].
  Var Decode(Var enc, std::span<const int> ids, std::span<const int> history) {
    const int n = static_cast<int>(ids.size());
    const IndexSpace space{n};
    std::vector<ad::RowRef> rows;
    rows.reserve(history.size() + 1);
    const ad::Tensor& emb = p_.at(p_.embedding());
    rows.push_back({&emb, Vocabulary::kBos});
    for (int y : history) {
      if (space.is_pointer(y)) {
        rows.push_back({&emb, ids[y - 1]});
      } else if (y == space.eos_index()) {
        rows.push_back({&p_.at(p_.eos_embedding()), 0});
      } else {
        rows.push_back({&p_.at(p_.class_embedding()), y - space.class_base()});
      }
    }
    Var x = Embed(g_.GatherRows(rows));
    for (const auto& layer : p_.decoder()) {
      Var h = Norm(x, layer.ln_self);
      x = g_.Add(x, Drop(AttentionBlock(h, h, layer.self_attn, true)));
      h = Norm(x, layer.ln_cross);
      x = g_.Add(x, Drop(AttentionBlock(h, enc, layer.cross_attn, false)));
      h = Norm(x, layer.ln_ff);
      x = g_.Add(x, Drop(FeedForward(h, layer.ff)));
    }
    return Norm(x, p_.decoder_norm());
  }

  // Rows of decoder states scored against every index 1..n+4.
  Var Logits(Var dec, Var enc, std::span<const int> ids) {
    Var words = g_.Gather(p_.at(p_.embedding()), ids);
    Var pointers = g_.ScalarMix(Param(p_.alpha()), enc, words);
    Var specials =
        g_.ConcatRows(Param(p_.eos_embedding()), Param(p_.class_embedding()));
    return g_.MatMulTransB(dec, g_.ConcatRows(pointers, specials));
  }

 private:
  Var Embed(Var rows) {
    const int m = static_cast<int>(g_.value(rows).rows());
    Var x = g_.Add(g_.Scale(rows, std::sqrt(static_cast<double>(c_.d_model))),
                   g_.Constant(SinusoidalPositions(m, c_.d_model)));
    return Drop(x);
  }

  Var Drop(Var x) { return g_.Dropout(x, c_.dropout, rng_); }

  Var Affine(Var x, int w, int b) {
    return g_.AddRowBroadcast(g_.MatMul(x, Param(w)), Param(b));
  }

  Var Norm(Var x, Parameters::Norm n) {
    return g_.LayerNorm(x, Param(n.gain), Param(n.bias));
  }

  Var AttentionBlock(Var query_in, Var memory, const Parameters::Attention& a,
                     bool causal) {
    Var q = Affine(query_in, a.wq, a.bq);
    // A key bias would shift every score in a row equally, so keys have none.
    Var k = g_.MatMul(memory, Param(a.wk));
    Var v = Affine(memory, a.wv, a.bv);
    Var o = g_.Attention(q, k, v, c_.n_heads, causal);
    return Affine(o, a.wo, a.bo);
  }

  Var FeedForward(Var x, const Parameters::FeedForward& f) {
    return Affine(g_.Gelu(Affine(x, f.w1, f.b1)), f.w2, f.b2);
  }

  Graph& g_;
  const Parameters& p_;
  const ModelConfig& c_;
  std::mt19937_64* rng_;
  std::vector<Var> cache_;
};

}  // namespace

void ModelConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("model config: ") + what);
  };
  require(d_model >= 1 && n_layers_enc >= 1 && n_layers_dec >= 1 &&
              n_heads >= 1 && d_ff >= 1 && vocab_size >= 1 && max_len >= 1,
          "all counts must be >= 1");
  require(d_model % n_heads == 0, "d_model must be divisible by n_heads");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
}

Vocabulary::Vocabulary() {
  Add("<unk>");
  Add("<s>");
}

int Vocabulary::Add(std::string_view token) {
  auto [it, inserted] = index_.emplace(std::string(token), size());
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

int Vocabulary::Id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::Encode(std::span<const std::string> tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(Id(t));
  return ids;
}

Vocabulary BuildVocabulary(std::span<const TokenizedSentence> sents) {
  Vocabulary vocab;
  vocab.Add(kNoneToken);
  for (const auto& s : sents) {
    for (const auto& t : s.tokens) vocab.Add(t);
  }
  return vocab;
}

Parameters::Parameters(const ModelConfig& config) : config_(config) {
  config.Validate();
  const int d = config.d_model;
  auto norm = [&](const std::string& name) {
    return Norm{set_.Add(name + ".gain", 1, d).id,
                set_.Add(name + ".bias", 1, d).id};
  };
  auto attention = [&](const std::string& name) {
    Attention a;
    a.wq = set_.Add(name + ".wq", d, d).id;
    a.bq = set_.Add(name + ".bq", 1, d).id;
    a.wk = set_.Add(name + ".wk", d, d).id;
    a.wv = set_.Add(name + ".wv", d, d).id;
    a.bv = set_.Add(name + ".bv", 1, d).id;
    a.wo = set_.Add(name + ".wo", d, d).id;
    a.bo = set_.Add(name + ".bo", 1, d).id;
    return a;
  };
  auto feed_forward = [&](const std::string& name) {
    return FeedForward{set_.Add(name + ".w1", d, config.d_ff).id,
                       set_.Add(name + ".b1", 1, config.d_ff).id,
                       set_.Add(name + ".w2", config.d_ff, d).id,
                       set_.Add(name + ".b2", 1, d).id};
  };
  embedding_ = set_.Add("embedding", config.vocab_size, d).id;
  eos_embedding_ = set_.Add("eos_embedding", 1, d).id;
  class_embedding_ = set_.Add("class_embedding", kNumPolarities, d).id;
  alpha_ = set_.Add("alpha", 1, 1).id;
  for (int l = 0; l < config.n_layers_enc; ++l) {
    const std::string pre = "encoder." + std::to_string(l);
    EncoderLayer layer;
    layer.ln_attn = norm(pre + ".ln_attn");
    layer.attn = attention(pre + ".attn");
    layer.ln_ff = norm(pre + ".ln_ff");
    layer.ff = feed_forward(pre + ".ff");
    encoder_.push_back(layer);
  }
  encoder_norm_ = norm("encoder.ln_final");
  for (int l = 0; l < config.n_layers_dec; ++l) {
    const std::string pre = "decoder." + std::to_string(l);
    DecoderLayer layer;
    layer.ln_self = norm(pre + ".ln_self");
    layer.self_attn = attention(pre + ".self_attn");
    layer.ln_cross = norm(pre + ".ln_cross");
    layer.cross_attn = attention(pre + ".cross_attn");
    layer.ln_ff = norm(pre + ".ln_ff");
    layer.ff = feed_forward(pre + ".ff");
    decoder_.push_back(layer);
  }
  decoder_norm_ = norm("decoder.ln_final");
}

void Parameters::InitUniform(double range, uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& t : set_) {
    const std::string& name = t->name;
    const bool is_gain = name.ends_with(".gain");
    const bool is_norm_bias = name.ends_with(".bias");
    if (t->id == alpha_) {
      t->value.setConstant(0.5);
    } else if (is_gain) {
      t->value.setOnes();
    } else if (is_norm_bias) {
      t->value.setZero();
    } else {
      for (Eigen::Index i = 0; i < t->value.size(); ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        t->value.data()[i] = (2.0 * u - 1.0) * range;
      }
    }
  }
  set_.ZeroGrad();
}

void Parameters::SetZero() {
  for (auto& t : set_) t->value.setZero();
  set_.ZeroGrad();
}

EncoderState Encode(std::span<const int> token_ids, const Parameters& params,
                    const ModelConfig& config) {
  CheckTokens(token_ids, config);
  Graph g(false);
  Network net(g, params, config, nullptr);
  EncoderState state;
  state.states = g.value(net.Encode(token_ids));
  state.token_ids.assign(token_ids.begin(), token_ids.end());
  return state;
}

DecoderStep RunDecoderStep(const EncoderState& enc,
                           std::span<const int> history,
                           const Parameters& params,
                           const ModelConfig& config) {
  CheckHistory(history, enc.n_tokens(), config);
  Graph g(false);
  Network net(g, params, config, nullptr);
  Var enc_var = g.Constant(enc.states);
  Var dec = net.Decode(enc_var, enc.token_ids, history);
  const Eigen::Index last = g.value(dec).rows() - 1;
  Var last_row = g.Constant(g.value(dec).row(last));
  Var logits = net.Logits(last_row, enc_var, enc.token_ids);

  DecoderStep step;
  step.hidden = g.value(last_row).row(0).transpose();
  step.logits = g.value(logits).row(0).transpose();
  const double mx = step.logits.maxCoeff();
  step.probs = (step.logits.array() - mx).exp();
  step.probs /= step.probs.sum();
  return step;
}

LossContext ForwardLoss(std::span<const int> token_ids,
                        std::span<const int> gold, const Parameters& params,
                        const ModelConfig& config,
                        std::mt19937_64* dropout_rng) {
  CheckTokens(token_ids, config);
  const IndexSpace space{static_cast<int>(token_ids.size())};
  if (auto check = ValidateSequence(gold, space); !check) {
    throw ValidationError("invalid gold sequence at position " +
                          std::to_string(check.position) + ": " +
                          check.reason);
  }
  CheckHistory(gold.first(gold.size() - 1), space.n_tokens, config);

  LossContext ctx;
  Graph& g = *ctx.graph_;
  Network net(g, params, config, dropout_rng);
  Var enc = net.Encode(token_ids);
  Var dec = net.Decode(enc, token_ids, gold.first(gold.size() - 1));
  Var logits = net.Logits(dec, enc, token_ids);
  std::vector<int> targets(gold.begin(), gold.end());
  for (int& t : targets) t -= 1;
  ctx.loss_ = g.SoftmaxCrossEntropy(logits, targets);
  ctx.loss_value_ = g.scalar(ctx.loss_);
  return ctx;
}

void LossContext::Backward(Parameters* params) {
  graph_->Backward(loss_, &params->set());
}

double SequenceNll(std::span<const int> token_ids, std::span<const int> gold,
                   const Parameters& params, const ModelConfig& config) {
  return ForwardLoss(token_ids, gold, params, config, nullptr).loss();
}

}  // namespace ssa
