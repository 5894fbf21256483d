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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ssa/cli/commands.hpp"

using ssa::cli::RunConfig;

namespace {

void AddModelFlags(CLI::App* cmd, RunConfig* c) {
  cmd->add_option("--d-model", c->d_model, "Hidden dimension");
  cmd->add_option("--layers", c->layers, "Encoder and decoder layers");
  cmd->add_option("--heads", c->heads, "Attention heads");
  cmd->add_option("--d-ff", c->d_ff, "Feed-forward dimension");
  cmd->add_option("--dropout", c->dropout, "Dropout rate");
  cmd->add_option("--optimizer", c->optimizer, "sgd or adam")
      ->check(CLI::IsMember({"sgd", "adam"}));
  cmd->add_option("--clip-norm", c->clip_norm, "Gradient norm clip (0 = off)");
}

void AddGenerationFlags(CLI::App* cmd, RunConfig* c) {
  cmd->add_option("--beam-size", c->beam_size, "Beam width");
  cmd->add_flag("--unconstrained", c->unconstrained,
                "Disable grammar-constrained decoding");
  cmd->add_option("--max-tuples", c->max_tuples, "Tuples generated at most");
}

void AddOffsetFlag(CLI::App* cmd, RunConfig* c) {
  static const std::map<std::string, ssa::OffsetMode> kModes = {
      {"bytes", ssa::OffsetMode::kBytes},
      {"codepoints", ssa::OffsetMode::kCodepoints}};
  cmd->add_option("--char-offsets", c->offsets,
                  "Interpret \"b:e\" offsets as bytes or codepoints")
      ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ssagen: generative structured sentiment analysis"};
  app.set_config("--config", "", "TOML/INI configuration file");
  app.require_subcommand(1);
  RunConfig c;
  double null_fraction = -1.0;

  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("--train", c.train_paths, "Training corpus (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--dev", c.dev_path, "Validation corpus")
      ->check(CLI::ExistingFile);
  train->add_option("--checkpoint", c.checkpoint, "Output directory")
      ->required();
  train->add_option("--lr", c.learning_rate, "Learning rate");
  train->add_option("--batch-size", c.batch_size, "Batch size");
  train->add_option("--epochs", c.epochs, "Epochs");
  train->add_option("--null-fraction", null_fraction,
                    "Subsample null instances to at most this fraction");
  train->add_option("--seed", c.seed, "Random seed");
  AddModelFlags(train, &c);
  AddGenerationFlags(train, &c);
  AddOffsetFlag(train, &c);

  auto* predict = app.add_subcommand("predict", "Predict opinion tuples");
  predict->add_option("--checkpoint", c.checkpoint, "Checkpoint file")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--test", c.test_path, "Input corpus")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--out", c.out, "Output JSON (default stdout)");
  predict->add_option("--seed", c.seed, "Random seed");
  AddGenerationFlags(predict, &c);
  AddOffsetFlag(predict, &c);

  auto* eval = app.add_subcommand("eval", "Score predictions with SG-F1");
  eval->add_option("--gold", c.gold_path, "Gold corpus")
      ->check(CLI::ExistingFile);
  eval->add_option("--test", c.test_path, "Gold corpus (alias of --gold)")
      ->check(CLI::ExistingFile);
  eval->add_option("--pred", c.pred_path, "Predicted corpus")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--format", c.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
  eval->add_option("--out", c.out, "Output file (default stdout)");
  AddOffsetFlag(eval, &c);

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("files", c.train_paths, "Corpus files")
      ->check(CLI::ExistingFile);
  stats->add_option("--test", c.test_path, "Corpus file")
      ->check(CLI::ExistingFile);
  stats->add_option("--format", c.format,
                    "json, or csv for the length histogram")
      ->check(CLI::IsMember({"json", "csv"}));
  stats->add_option("--out", c.out, "Output file (default stdout)");
  AddOffsetFlag(stats, &c);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--n-sentences", c.n_sentences, "Sentences");
  synth->add_option("--seed", c.seed, "Grammar seed");
  synth->add_option("--null-fraction", c.synth_null_fraction,
                    "Fraction of opinion-free sentences");
  synth->add_option("--out", c.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ssa::cli::kExitOk : ssa::cli::kExitValidation;
  }
  if (null_fraction >= 0.0 || train->count("--null-fraction") > 0) {
    c.null_fraction = null_fraction;
  }

  return ssa::cli::RunGuarded(
      [&]() {
        if (*train) return ssa::cli::CmdTrain(c, std::cout, std::cerr);
        if (*predict) return ssa::cli::CmdPredict(c, std::cout, std::cerr);
        if (*eval) return ssa::cli::CmdEval(c, std::cout, std::cerr);
        if (*stats) return ssa::cli::CmdStats(c, std::cout, std::cerr);
        return ssa::cli::CmdSynth(c, std::cout, std::cerr);
      },
      std::cerr);
}
