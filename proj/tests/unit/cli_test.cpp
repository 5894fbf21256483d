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

#include "ssa/cli/commands.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"
#include "ssa/checkpoint.hpp"
#include "ssa/cli/synthetic.hpp"
#include "ssa/codec.hpp"

namespace ssa::cli {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void Put(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ssagen_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Synth(const std::string& name, int n, uint64_t seed,
                    double null_fraction = 0.1) {
    RunConfig c;
    c.n_sentences = n;
    c.seed = seed;
    c.synth_null_fraction = null_fraction;
    c.out = (dir_ / name).string();
    std::ostringstream out, err;
    EXPECT_EQ(CmdSynth(c, out, err), kExitOk);
    return c.out;
  }

  RunConfig SmallTrain(const std::string& train, const std::string& dev,
                       const std::string& ckdir) {
    RunConfig c;
    c.train_paths = {train};
    c.dev_path = dev;
    c.checkpoint = (dir_ / ckdir).string();
    c.epochs = 2;
    c.d_model = 16;
    c.layers = 1;
    c.heads = 2;
    c.d_ff = 16;
    c.optimizer = "adam";
    c.learning_rate = 1e-3;
    c.batch_size = 4;
    c.max_tuples = 3;
    c.beam_size = 2;
    return c;
  }

  fs::path dir_;
};

TEST_F(CliTest, SynthIsDeterministicAndValid) {
  const auto a = Slurp(Synth("a.json", 120, 4));
  const auto b = Slurp(Synth("b.json", 120, 4));
  const auto c = Slurp(Synth("c.json", 120, 5));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  const auto docs = ParseCorpus(a);
  ASSERT_EQ(docs.size(), 120u);
  EXPECT_EQ(ComputeStats(docs).n_null, 12);
}

TEST_F(CliTest, SyntheticGoldRoundTripsThroughCodec) {
  const auto docs = GenerateSyntheticCorpus({400, 9, 0.1});
  const PreparedCorpus pc = PrepareCorpus(docs);
  EXPECT_TRUE(pc.diagnostics.empty());
  for (size_t i = 0; i < pc.sentences.size(); ++i) {
    const auto& sent = pc.sentences[i];
    const IndexSpace space = IndexSpaceFor(sent);
    const auto seq = EncodeTuples(pc.tuples[i], space);
    ASSERT_TRUE(ValidateSequence(seq.indices, space));
    auto expected = pc.tuples[i];
    CanonicalSort(&expected);
    ASSERT_EQ(DecodeSequence(seq.indices, space).tuples, expected);
  }
}

TEST_F(CliTest, HolderlessInstancesRoundTrip) {
  const auto docs = GenerateSyntheticCorpus({500, 3, 0.1});
  const PreparedCorpus pc = PrepareCorpus(docs);
  int holderless = 0, on_prefix = 0;
  for (size_t i = 0; i < docs.size(); ++i) {
    for (const auto& op : docs[i].opinions) holderless += op.source.empty();
    for (const auto& t : pc.tuples[i]) {
      on_prefix += t.holder == TokenSpan{1, 1};
    }
  }
  ASSERT_GT(holderless, 0);
  EXPECT_EQ(on_prefix, holderless);
  const std::string written = WritePredictions(pc.sentences, pc.tuples);
  const auto back = ParseCorpus(written);
  ASSERT_EQ(back.size(), docs.size());
  for (size_t i = 0; i < docs.size(); ++i) {
    ASSERT_EQ(back[i].opinions.size(), docs[i].opinions.size());
    for (size_t k = 0; k < docs[i].opinions.size(); ++k) {
      auto original = docs[i].opinions[k];
      original.intensity.reset();
      bool found = false;
      for (const auto& op : back[i].opinions) found |= op == original;
      ASSERT_TRUE(found) << docs[i].sent_id;
    }
  }
  EXPECT_NE(written.find(R"("Source":[[],[]])"), std::string::npos);
}

TEST_F(CliTest, TrainPredictEvalPipeline) {
  const auto train = Synth("train.json", 24, 1);
  const auto dev = Synth("dev.json", 8, 2);
  RunConfig c = SmallTrain(train, dev, "ck");
  std::ostringstream out, err;
  ASSERT_EQ(CmdTrain(c, out, err), kExitOk);
  const fs::path ck = dir_ / "ck";
  ASSERT_TRUE(fs::exists(ck / "best.ckpt"));
  ASSERT_TRUE(fs::exists(ck / "final.ckpt"));
  std::istringstream log(Slurp(ck / "metrics.jsonl"));
  std::string line;
  int lines = 0;
  while (std::getline(log, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["epoch"].get<int>(), ++lines);
    EXPECT_TRUE(j.contains("mean_loss"));
    EXPECT_TRUE(j.contains("dev_sg_f1"));
  }
  EXPECT_EQ(lines, 2);
  const Checkpoint loaded = LoadCheckpoint((ck / "final.ckpt").string());
  EXPECT_EQ(loaded.epoch, 2);
  EXPECT_EQ(loaded.config.d_model, 16);

  RunConfig p;
  p.checkpoint = (ck / "final.ckpt").string();
  p.test_path = dev;
  p.out = (dir_ / "pred.json").string();
  p.max_tuples = 3;
  ASSERT_EQ(CmdPredict(p, out, err), kExitOk);
  const auto preds = ReadCorpusFile(p.out);
  EXPECT_EQ(preds.size(), 8u);

  RunConfig e;
  e.gold_path = dev;
  e.pred_path = p.out;
  std::ostringstream report;
  ASSERT_EQ(CmdEval(e, report, err), kExitOk);
  const auto j = nlohmann::json::parse(report.str());
  EXPECT_GE(j["sentiment_graph_f1"].get<double>(), 0.0);
  EXPECT_LE(j["sentiment_graph_f1"].get<double>(), 1.0);
}

TEST_F(CliTest, TrainingIsDeterministic) {
  const auto train = Synth("train.json", 16, 1);
  const auto dev = Synth("dev.json", 6, 2);
  std::ostringstream out, err;
  ASSERT_EQ(CmdTrain(SmallTrain(train, dev, "r1"), out, err), kExitOk);
  ASSERT_EQ(CmdTrain(SmallTrain(train, dev, "r2"), out, err), kExitOk);
  EXPECT_EQ(Slurp(dir_ / "r1" / "metrics.jsonl"),
            Slurp(dir_ / "r2" / "metrics.jsonl"));
  EXPECT_EQ(Slurp(dir_ / "r1" / "final.ckpt"), Slurp(dir_ / "r2" / "final.ckpt"));
}

TEST_F(CliTest, EvalFixedPoints) {
  const auto gold = Synth("gold.json", 50, 7);
  RunConfig e;
  e.gold_path = gold;
  e.pred_path = gold;
  std::ostringstream out, err;
  ASSERT_EQ(CmdEval(e, out, err), kExitOk);
  EXPECT_EQ(nlohmann::json::parse(out.str())["sentiment_graph_f1"].get<double>(),
            1.0);

  auto docs = ReadCorpusFile(gold);
  for (auto& d : docs) d.opinions.clear();
  const std::string empty = (dir_ / "empty.json").string();
  Put(empty, SerializeCorpus(docs));
  e.pred_path = empty;
  std::ostringstream out2;
  ASSERT_EQ(CmdEval(e, out2, err), kExitOk);
  const auto j = nlohmann::json::parse(out2.str());
  EXPECT_EQ(j["sentiment_graph_f1"].get<double>(), 0.0);
  EXPECT_EQ(j["precision"].get<double>(), 0.0);

  e.format = "text";
  std::ostringstream table;
  ASSERT_EQ(CmdEval(e, table, err), kExitOk);
  EXPECT_NE(table.str().find("sentiment_graph_f1"), std::string::npos);
}

TEST_F(CliTest, EvalHotelReview) {
  const std::string text =
      "The size of room is reasonable , but floor , walls and ceiling are in "
      "very poor conditions .";
  auto ent = [&](const std::string& phrase) {
    const auto b = text.find(phrase);
    return "[[\"" + phrase + "\"],[\"" + std::to_string(b) + ":" +
           std::to_string(b + phrase.size()) + "\"]]";
  };
  auto op = [&](const std::string& t, const std::string& e, const char* pol) {
    return R"({"Source":[[],[]],"Target":)" + ent(t) +
           R"(,"Polar_expression":)" + ent(e) + R"(,"Polarity":")" + pol +
           "\"}";
  };
  auto corpus = [&](const std::string& t1, const std::string& e2) {
    return R"([{"sent_id":"hotel","text":")" + text + R"(","opinions":[)" +
           op(t1, "reasonable", "Positive") + "," +
           op("walls", e2, "Negative") + "," +
           op("floor", "in very poor conditions", "Negative") + "," +
           op("ceiling", "in very poor conditions", "Negative") + "]}]";
  };
  Put(dir_ / "gold.json", corpus("The size of room", "in very poor conditions"));
  Put(dir_ / "pred.json", corpus("The size", "very poor"));
  RunConfig e;
  e.gold_path = (dir_ / "gold.json").string();
  e.pred_path = (dir_ / "pred.json").string();
  std::ostringstream out, err;
  ASSERT_EQ(CmdEval(e, out, err), kExitOk);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_NEAR(j["sentiment_graph_f1"].get<double>(), 22.0 / 23.0, 1e-12);
}

TEST_F(CliTest, StatsReportsNullPercent) {
  const auto path = Synth("s.json", 200, 3, 0.25);
  RunConfig c;
  c.test_path = path;
  std::ostringstream out, err;
  ASSERT_EQ(CmdStats(c, out, err), kExitOk);
  const auto j = nlohmann::json::parse(out.str());
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["n_sentences"].get<int>(), 200);
  EXPECT_EQ(j[0]["n_null"].get<int>(), 50);
  EXPECT_EQ(j[0]["null_percent"].get<std::string>(), "25.00");
  c.format = "csv";
  std::ostringstream csv;
  ASSERT_EQ(CmdStats(c, csv, err), kExitOk);
  EXPECT_EQ(csv.str().rfind("length,count\n", 0), 0u);
}

TEST_F(CliTest, GuardMapsErrorsToExitCodes) {
  std::ostringstream err;
  EXPECT_EQ(RunGuarded([] { return kExitOk; }, err), kExitOk);
  EXPECT_EQ(RunGuarded([]() -> int { throw ValidationError("bad"); }, err),
            kExitValidation);
  EXPECT_EQ(RunGuarded([]() -> int { throw ParseError("bad json", 3); }, err),
            kExitValidation);
  EXPECT_EQ(RunGuarded([]() -> int { throw TrainingError("nan"); }, err),
            kExitRuntime);
  EXPECT_NE(err.str().find("bad"), std::string::npos);
}

#ifdef SSAGEN_BINARY
int RunBinary(const std::string& args) {
  const std::string cmd =
      std::string(SSAGEN_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST_F(CliTest, BinaryExitCodes) {
  const auto gold = Synth("g.json", 20, 1);
  Put(dir_ / "bad.json", "[{\"sent_id\": ");
  auto docs = ReadCorpusFile(gold);
  docs.pop_back();
  Put(dir_ / "short.json", SerializeCorpus(docs));
  EXPECT_EQ(RunBinary("eval --gold " + gold + " --pred " + gold), 0);
  EXPECT_EQ(RunBinary("eval --gold " + gold + " --pred " +
                      (dir_ / "bad.json").string()),
            1);
  EXPECT_EQ(RunBinary("eval --gold " + gold + " --pred " +
                      (dir_ / "short.json").string()),
            1);
  EXPECT_EQ(RunBinary("eval --pred /nonexistent/file.json"), 1);
  EXPECT_EQ(RunBinary("frobnicate"), 1);
  EXPECT_EQ(RunBinary("--help"), 0);
  EXPECT_EQ(RunBinary("synth --n-sentences 5 --out " +
                      (dir_ / "o.json").string()),
            0);
  EXPECT_EQ(ReadCorpusFile((dir_ / "o.json").string()).size(), 5u);
}

TEST_F(CliTest, ConfigFileSuppliesDefaults) {
  Put(dir_ / "synth.toml", "[synth]\nn-sentences = 7\nseed = 3\n");
  const std::string out1 = (dir_ / "a.json").string();
  const std::string out2 = (dir_ / "b.json").string();
  ASSERT_EQ(RunBinary("--config " + (dir_ / "synth.toml").string() +
                      " synth --out " + out1),
            0);
  EXPECT_EQ(ReadCorpusFile(out1).size(), 7u);
  // Command-line flags win over the file.
  ASSERT_EQ(RunBinary("--config " + (dir_ / "synth.toml").string() +
                      " synth --n-sentences 4 --out " + out2),
            0);
  EXPECT_EQ(ReadCorpusFile(out2).size(), 4u);
}
#endif

}  // namespace
}  // namespace ssa::cli
