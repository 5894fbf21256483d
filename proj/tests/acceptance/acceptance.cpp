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

// Acceptance gate: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "oracles.hpp"
#include "ssa/cli/commands.hpp"
#include "ssa/cli/synthetic.hpp"
#include "ssa/codec.hpp"
#include "ssa/inference.hpp"
#include "ssa/metric.hpp"
#include "ssa/model.hpp"

namespace fs = std::filesystem;
using namespace ssa;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome Check(bool ok, std::string detail) {
  return {ok ? Status::kPass : Status::kFail, std::move(detail)};
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

std::string Fmt(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path WorkDir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "ssagen_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Outcome CodecRoundTrip() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  int failures = 0;
  const int cases = 10000;
  for (int i = 0; i < cases; ++i) {
    auto inst = testing::RandomSentenceWithTuples(rng, 20, 8, i % 2 == 0);
    const IndexSpace space = IndexSpaceFor(inst.sentence);
    const auto decoded =
        DecodeSequence(EncodeTuples(inst.tuples, space).indices, space);
    auto expected = inst.tuples;
    CanonicalSort(&expected);
    failures += !(decoded.tuples == expected && decoded.diagnostics.empty());
  }
  const double secs = Seconds(t0);
  return Check(failures == 0 && secs < 10.0,
               Fmt("%d/%d exact, %.2fs (limit 10s)", cases - failures, cases,
                   secs));
}

Outcome BookGolden() {
  const auto sent =
      Tokenize(RawDocument{"book", "I would not suggest this book", {}}, false);
  const IndexSpace space = IndexSpaceFor(sent);
  const OpinionTuple gold{{1, 1}, {5, 6}, {2, 4}, Polarity::kNegative};
  const auto seq = EncodeTuples({gold}, space).indices;
  const std::vector<int> want{5, 6, 2, 4, 1, 1, 10, 7};
  const auto back = DecodeSequence(seq, space);
  std::string got;
  for (int y : seq) got += (got.empty() ? "" : ",") + std::to_string(y);
  return Check(seq == want && back.tuples == std::vector<OpinionTuple>{gold} &&
                   back.diagnostics.empty(),
               "encoded [" + got + "]");
}

Outcome MetricOracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(777);
  double worst = 0.0;
  const int pairs = 10000;
  for (int i = 0; i < pairs; ++i) {
    const int n = testing::UniformInt(rng, 1, 10);
    const std::vector<SentGraph> g{testing::RandomGraph(rng, "s", n, 4)};
    const std::vector<SentGraph> p{testing::RandomGraph(rng, "s", n, 4)};
    const auto a = SgF1(g, p);
    const auto b = OracleSgF1(g, p);
    for (double d : {a.weighted_tp_precision - b.weighted_tp_precision,
                     a.weighted_tp_recall - b.weighted_tp_recall,
                     a.precision - b.precision, a.recall - b.recall,
                     a.f1 - b.f1}) {
      worst = std::max(worst, std::abs(d));
    }
  }
  const double secs = Seconds(t0);
  return Check(worst <= 1e-12 && secs < 60.0,
               Fmt("%d pairs, max |diff| %.3g, %.2fs (limit 60s)", pairs,
                   worst, secs));
}

Outcome MetricFixedPoints() {
  std::mt19937_64 rng(31);
  bool identity = true;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<SentGraph> gold;
    for (int s = 0; s < 4; ++s) {
      gold.push_back(testing::RandomGraph(rng, std::to_string(s), 12, 5));
    }
    identity &= SgF1(gold, gold).f1 == 1.0;
  }
  bool zero = true;
  for (int trial = 0; trial < 500; ++trial) {
    SentGraph g = testing::RandomGraph(rng, "z", 8, 4);
    if (g.tuples.empty()) continue;
    for (auto& t : g.tuples) t.polarity = Polarity::kPositive;
    SentGraph disjoint = g, flipped = g;
    for (auto& t : disjoint.tuples) {
      for (int& x : t.expression) x += 100;
    }
    for (auto& t : flipped.tuples) t.polarity = Polarity::kNegative;
    const std::vector<SentGraph> gv{g}, dv{disjoint}, fv{flipped};
    zero &= SgF1(gv, dv).f1 == 0.0 && SgF1(dv, gv).f1 == 0.0;
    zero &= SgF1(gv, fv).f1 == 0.0;
  }

  auto range = [](int a, int b) {
    TokenSet s;
    for (int i = a; i <= b; ++i) s.push_back(i);
    return s;
  };
  const std::vector<SentGraph> gold{
      {"hotel",
       {{{}, range(1, 4), {6}, Polarity::kPositive},
        {{}, {11}, range(15, 18), Polarity::kNegative},
        {{}, {9}, range(15, 18), Polarity::kNegative},
        {{}, {13}, range(15, 18), Polarity::kNegative}}}};
  const std::vector<SentGraph> pred{
      {"hotel",
       {{{}, range(1, 2), {6}, Polarity::kPositive},
        {{}, {11}, range(16, 17), Polarity::kNegative},
        {{}, {9}, range(15, 18), Polarity::kNegative},
        {{}, {13}, range(15, 18), Polarity::kNegative}}}};
  const auto r = SgF1(gold, pred);
  const auto o = OracleSgF1(gold, pred);
  bool exact_pairs = true;
  int at_one = 0;
  for (const auto& p : r.per_sentence[0].recall_pairs) {
    if (p.gold >= 2) exact_pairs &= p.pred == p.gold && p.weight == 1.0;
    at_one += p.weight == 1.0;
  }
  const bool table = r.f1 > 0.5 && r.f1 < 1.0 && std::abs(r.f1 - o.f1) < 1e-12 &&
                     exact_pairs && at_one == 2;
  return Check(identity && zero && table,
               Fmt("identity %s, disjoint/flipped %s, hotel F1 %.4f "
                   "(P %.4f R %.4f) with %d pairs at 1.0",
                   identity ? "1.0" : "FAIL", zero ? "0.0" : "FAIL", r.f1,
                   r.precision, r.recall, at_one));
}

Outcome GradientCheck() {
  const auto t0 = std::chrono::steady_clock::now();
  ModelConfig c;
  c.d_model = 8;
  c.n_layers_enc = 1;
  c.n_layers_dec = 1;
  c.n_heads = 2;
  c.d_ff = 32;
  c.vocab_size = 16;
  Parameters p(c);
  p.InitUniform(0.3, 8);
  const std::vector<int> ids{2, 9, 4, 11, 5, 13, 7};
  const std::vector<int> gold{5, 6, 2, 4, 1, 1, 11, 7, 7, 3, 3, 2, 2, 9, 8};
  p.ZeroGrad();
  ForwardLoss(ids, gold, p, c).Backward(&p);
  const Parameters analytic = p;
  double worst = 0.0;
  std::string worst_name;
  for (int id = 0; id < p.set().size(); ++id) {
    const auto numeric = testing::FiniteDifferenceGradient(ids, gold, &p, id, 1e-4);
    const double err = testing::RelativeError(analytic.at(id).grad, numeric);
    if (err >= worst) {
      worst = err;
      worst_name = analytic.at(id).name;
    }
  }
  const double secs = Seconds(t0);
  return Check(worst < 1e-3 && secs < 120.0,
               Fmt("%d tensors, worst rel. error %.2e (%s), %.1fs (limit 120s)",
                   p.set().size(), worst, worst_name.c_str(), secs));
}

Outcome ConstrainedSoundness() {
  std::mt19937_64 rng(4242);
  const int models = 1000;
  int valid = 0, unconstrained_invalid = 0;
  for (int m = 0; m < models; ++m) {
    ModelConfig c;
    c.d_model = 8;
    c.n_layers_enc = 1;
    c.n_layers_dec = 1;
    c.n_heads = 2;
    c.d_ff = 16;
    c.vocab_size = 24;
    Parameters p(c);
    p.InitUniform(std::uniform_real_distribution<double>(0.1, 1.5)(rng), rng());
    std::vector<int> ids(testing::UniformInt(rng, 1, 12));
    for (int& id : ids) id = testing::UniformInt(rng, 0, c.vocab_size - 1);
    GenerationConfig gen;
    gen.beam_size = testing::UniformInt(rng, 1, 3);
    gen.max_tuples = 3;
    const IndexSpace space{static_cast<int>(ids.size())};
    valid += ValidateSequence(Generate(ids, p, c, gen).sequence.indices, space).ok;
    gen.constrained = false;
    unconstrained_invalid +=
        !ValidateSequence(Generate(ids, p, c, gen).sequence.indices, space).ok;
  }
  return Check(valid == models && unconstrained_invalid > 0,
               Fmt("constrained valid %d/%d, unconstrained invalid %d/%d", valid,
                   models, unconstrained_invalid, models));
}

struct TrainRun {
  std::vector<nlohmann::json> epochs;
  double seconds = 0.0;
  int exit_code = -1;
  std::string log;
};

cli::RunConfig LearnabilityConfig(const std::string& ckdir) {
  cli::RunConfig c;
  c.train_paths = {(WorkDir() / "synth_train.json").string()};
  c.dev_path = (WorkDir() / "synth_dev.json").string();
  c.checkpoint = (WorkDir() / ckdir).string();
  c.epochs = 50;
  c.d_model = 64;
  c.layers = 2;
  c.heads = 4;
  c.d_ff = 128;
  c.optimizer = "adam";
  c.learning_rate = 1e-3;
  c.batch_size = 16;
  c.null_fraction = 0.1;
  c.seed = 1;
  return c;
}

void WriteSyntheticSplits() {
  for (auto [name, n, seed] : {std::tuple{"synth_train.json", 500, 1},
                               std::tuple{"synth_dev.json", 100, 2}}) {
    cli::RunConfig c;
    c.n_sentences = n;
    c.seed = seed;
    c.synth_null_fraction = 0.1;
    c.out = (WorkDir() / name).string();
    std::ostringstream out, err;
    cli::CmdSynth(c, out, err);
  }
}

TrainRun Train(const std::string& ckdir) {
  TrainRun run;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  run.exit_code = cli::RunGuarded(
      [&] { return cli::CmdTrain(LearnabilityConfig(ckdir), out, err); }, err);
  run.seconds = Seconds(t0);
  run.log = Slurp(WorkDir() / ckdir / "metrics.jsonl");
  std::istringstream lines(run.log);
  std::string line;
  while (std::getline(lines, line)) run.epochs.push_back(nlohmann::json::parse(line));
  if (run.exit_code != 0) std::cerr << err.str();
  return run;
}

TrainRun& FirstRun() {
  static TrainRun run = [] {
    WriteSyntheticSplits();
    return Train("run1");
  }();
  return run;
}

Outcome Learnability() {
  const TrainRun& run = FirstRun();
  if (run.exit_code != 0 || run.epochs.size() != 50) {
    return Check(false, Fmt("train exited %d after %zu epochs", run.exit_code,
                            run.epochs.size()));
  }
  double best = 0.0;
  int best_epoch = 0;
  for (const auto& e : run.epochs) {
    if (e["dev_sg_f1"].get<double>() > best) {
      best = e["dev_sg_f1"].get<double>();
      best_epoch = e["epoch"].get<int>();
    }
  }
  const double first = run.epochs.front()["mean_loss"].get<double>();
  const double last = run.epochs.back()["mean_loss"].get<double>();
  return Check(best >= 0.80 && run.seconds < 900.0 && last < 0.25 * first,
               Fmt("best dev SG-F1 %.4f at epoch %d, loss %.4g -> %.4g "
                   "(%.2f%% of epoch 1), %.0fs (limit 900s)",
                   best, best_epoch, first, last, 100.0 * last / first,
                   run.seconds));
}

Outcome NullHandling() {
  const auto docs = cli::GenerateSyntheticCorpus({2000, 17, 0.1});
  const cli::PreparedCorpus pc = cli::PrepareCorpus(docs);
  int holderless = 0, mapped = 0, restored = 0;
  const auto back = ParseCorpus(WritePredictions(pc.sentences, pc.tuples));
  for (size_t i = 0; i < docs.size(); ++i) {
    for (size_t k = 0; k < docs[i].opinions.size(); ++k) {
      const RawOpinion& op = docs[i].opinions[k];
      if (!op.source.empty()) continue;
      ++holderless;
      Diagnostics d;
      mapped += EntityToSpan(pc.sentences[i], op.source, &d) == TokenSpan{1, 1};
      RawOpinion want = op;
      want.intensity.reset();
      for (const auto& got : back[i].opinions) {
        if (got == want) {
          ++restored;
          break;
        }
      }
    }
  }
  return Check(holderless > 0 && mapped == holderless && restored == holderless,
               Fmt("%d holder-less instances: %d mapped to (1,1), %d "
                   "round-tripped with empty Source",
                   holderless, mapped, restored));
}

Outcome Determinism() {
  const TrainRun& a = FirstRun();
  const TrainRun b = Train("run2");
  const bool same = !a.log.empty() && a.log == b.log;
  return Check(same, Fmt("metrics logs %s (%zu bytes)",
                         same ? "byte-identical" : "differ", a.log.size()));
}

Outcome RealDataPathway() {
  const char* path = std::getenv("SSAGEN_OPENER_EN_TRAIN");
  if (path == nullptr || *path == '\0') {
    return {Status::kSkip,
            "set SSAGEN_OPENER_EN_TRAIN to an OpeNER_en train.json to run"};
  }
  const CorpusStats s = ComputeStats(ReadCorpusFile(path));
  const std::string pct = Fmt("%.2f", 100.0 * s.null_fraction);
  return Check(s.n_sentences == 1744 && pct == "19.72",
               Fmt("%lld sentences, %s%% null (expected 1744, 19.72%%)",
                   static_cast<long long>(s.n_sentences), pct.c_str()));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"codec-round-trip", CodecRoundTrip},
      {"book-example-golden", BookGolden},
      {"metric-oracle-equivalence", MetricOracle},
      {"metric-fixed-points", MetricFixedPoints},
      {"gradient-check", GradientCheck},
      {"constrained-decoding-soundness", ConstrainedSoundness},
      {"learnability", Learnability},
      {"null-handling", NullHandling},
      {"determinism", Determinism},
      {"real-data-stats", RealDataPathway},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Status::kPass   ? "PASS"
                      : o.status == Status::kFail ? "FAIL"
                                                  : "SKIP";
    failed += o.status == Status::kFail;
    std::cout << tag << "  " << name << "  " << o.detail << std::endl;
  }
  fs::remove_all(WorkDir());
  std::cout << (failed == 0 ? "ALL PASS" : Fmt("%d FAILED", failed)) << std::endl;
  return failed == 0 ? 0 : 1;
}
