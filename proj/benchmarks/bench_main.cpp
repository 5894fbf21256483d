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

#include <benchmark/benchmark.h>

#include <random>

#include "ssa/codec.hpp"
#include "ssa/inference.hpp"
#include "ssa/metric.hpp"
#include "ssa/model.hpp"

namespace {

using namespace ssa;

TokenizedSentence Sentence(int n) {
  std::string text;
  for (int i = 0; i < n; ++i) text += (i ? " w" : "w") + std::to_string(i);
  return Tokenize(RawDocument{"b", text, {}}, true);
}

std::vector<OpinionTuple> Tuples(int n_tokens, int k, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> tok(2, n_tokens);
  std::vector<OpinionTuple> out;
  for (int i = 0; i < k; ++i) {
    auto span = [&] {
      int a = tok(rng), b = tok(rng);
      return TokenSpan{std::min(a, b), std::max(a, b)};
    };
    out.push_back({TokenSpan{1, 1}, span(), span(),
                   static_cast<Polarity>(i % kNumPolarities)});
  }
  return out;
}

void BM_EncodeDecode(benchmark::State& state) {
  const auto sent = Sentence(40);
  const IndexSpace space = IndexSpaceFor(sent);
  const auto tuples = Tuples(sent.size(), static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    auto seq = EncodeTuples(tuples, space);
    benchmark::DoNotOptimize(DecodeSequence(seq.indices, space));
  }
}
BENCHMARK(BM_EncodeDecode)->Arg(1)->Arg(4)->Arg(10);

SentGraph Graph(int n_tuples, uint64_t seed) {
  const auto sent = Sentence(40);
  SentGraph g{"b", {}};
  for (const auto& t : Tuples(sent.size(), n_tuples, seed)) {
    g.tuples.push_back(ToGraphTuple(t, sent));
  }
  return g;
}

void BM_SgF1(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const std::vector<SentGraph> gold{Graph(k, 1)}, pred{Graph(k, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(SgF1(gold, pred));
}
BENCHMARK(BM_SgF1)->Arg(2)->Arg(8)->Arg(12)->Arg(24);

ModelConfig BenchConfig() {
  ModelConfig c;
  c.vocab_size = 100;
  return c;
}

std::vector<int> Ids(int n) {
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = 2 + i % 98;
  return ids;
}

void BM_ForwardBackward(benchmark::State& state) {
  const ModelConfig c = BenchConfig();
  Parameters p(c);
  p.InitUniform(0.08, 1);
  const int n = static_cast<int>(state.range(0));
  const auto ids = Ids(n);
  const auto gold = EncodeTuples(Tuples(n, 2, 3), IndexSpace{n}).indices;
  for (auto _ : state) {
    p.ZeroGrad();
    auto ctx = ForwardLoss(ids, gold, p, c);
    ctx.Backward(&p);
    benchmark::DoNotOptimize(ctx.loss());
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  const ModelConfig c = BenchConfig();
  Parameters p(c);
  p.InitUniform(0.08, 1);
  const auto ids = Ids(20);
  GenerationConfig gen;
  gen.beam_size = static_cast<int>(state.range(0));
  gen.max_tuples = 2;
  for (auto _ : state) benchmark::DoNotOptimize(Generate(ids, p, c, gen));
}
BENCHMARK(BM_Generate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
