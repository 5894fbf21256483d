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

#ifndef SSA_CLI_COMMANDS_HPP_
#define SSA_CLI_COMMANDS_HPP_

// Subcommands of the ssagen tool. Each returns the process exit code:
// 0 ok, 1 validation error, 2 runtime error.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssa/corpus.hpp"
#include "ssa/inference.hpp"
#include "ssa/metric.hpp"
#include "ssa/model.hpp"
#include "ssa/trainer.hpp"

namespace ssa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct RunConfig {
  std::vector<std::string> train_paths;
  std::string dev_path;
  std::string test_path;
  std::string gold_path;
  std::string pred_path;
  std::string checkpoint;
  std::string out;

  int batch_size = 16;
  double learning_rate = 5e-5;
  int epochs = 50;
  // Unset keeps the corpus's natural null fraction.
  std::optional<double> null_fraction;
  int beam_size = 4;
  bool unconstrained = false;
  uint64_t seed = 1;
  OffsetMode offsets = OffsetMode::kBytes;

  int d_model = 64;
  int layers = 2;
  int heads = 4;
  int d_ff = 128;
  double dropout = 0.0;
  std::string optimizer = "sgd";
  double clip_norm = 1.0;
  int max_tuples = 10;

  int n_sentences = 500;
  double synth_null_fraction = 0.1;

  std::string format = "json";
};

// Throws ValidationError for out-of-range values.
void ValidateTrainConfig(const RunConfig& config);

// Tokenized, None-prefixed sentences with their gold tuples.
struct PreparedCorpus {
  std::vector<RawDocument> docs;
  std::vector<TokenizedSentence> sentences;
  std::vector<std::vector<OpinionTuple>> tuples;
  Diagnostics diagnostics;
};

PreparedCorpus PrepareCorpus(std::vector<RawDocument> docs);

std::vector<Example> MakeExamples(const PreparedCorpus& corpus,
                                  const Vocabulary& vocab);

struct EvaluationResult {
  SGF1Report report;
  std::vector<std::vector<OpinionTuple>> predictions;
  int64_t invalid_sequences = 0;
};

// Generates for every sentence and scores against the documents' gold
// annotations.
EvaluationResult EvaluateModel(const Parameters& params,
                               const Vocabulary& vocab,
                               const PreparedCorpus& corpus,
                               const GenerationConfig& gen);

GenerationConfig GenerationFor(const RunConfig& config);

int CmdTrain(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdPredict(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdEval(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdStats(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdSynth(const RunConfig& config, std::ostream& out, std::ostream& err);

// Runs `body`, mapping library exceptions to exit codes and messages on err.
int RunGuarded(const std::function<int()>& body, std::ostream& err);

std::string ReportJson(const SGF1Report& report);
std::string ReportTable(const SGF1Report& report);

}  // namespace ssa::cli

#endif  // SSA_CLI_COMMANDS_HPP_
