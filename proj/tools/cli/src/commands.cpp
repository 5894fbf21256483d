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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ssa/checkpoint.hpp"
#include "ssa/cli/synthetic.hpp"
#include "ssa/codec.hpp"

namespace ssa::cli {
namespace {

using nlohmann::ordered_json;

void WriteOutput(const RunConfig& config, const std::string& text,
                 std::ostream& out) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  const std::string tmp = config.out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp);
    f << text;
  }
  std::filesystem::rename(tmp, config.out);
}

std::vector<RawDocument> ReadAll(const std::vector<std::string>& paths,
                                 OffsetMode mode) {
  std::vector<RawDocument> docs;
  for (const auto& p : paths) {
    auto part = ReadCorpusFile(p, mode);
    docs.insert(docs.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return docs;
}

ordered_json ReportObject(const SGF1Report& r) {
  ordered_json j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["sentiment_graph_f1"] = r.f1;
  j["weighted_tp_precision"] = r.weighted_tp_precision;
  j["weighted_tp_recall"] = r.weighted_tp_recall;
  j["n_predicted"] = r.n_predicted;
  j["n_gold"] = r.n_gold;
  j["per_sentence"] = ordered_json::array();
  for (const auto& s : r.per_sentence) {
    ordered_json pairs = ordered_json::array();
    for (const auto& p : s.recall_pairs) {
      pairs.push_back({{"pred", p.pred}, {"gold", p.gold}, {"weight", p.weight}});
    }
    j["per_sentence"].push_back({{"sent_id", s.sent_id},
                                 {"n_predicted", s.n_predicted},
                                 {"n_gold", s.n_gold},
                                 {"weighted_tp_precision",
                                  s.weighted_tp_precision},
                                 {"weighted_tp_recall", s.weighted_tp_recall},
                                 {"recall_pairs", pairs}});
  }
  return j;
}

ModelConfig ModelConfigFor(const RunConfig& rc, int vocab_size) {
  ModelConfig c;
  c.d_model = rc.d_model;
  c.n_layers_enc = rc.layers;
  c.n_layers_dec = rc.layers;
  c.n_heads = rc.heads;
  c.d_ff = rc.d_ff;
  c.vocab_size = vocab_size;
  c.max_len = 512;
  c.dropout = rc.dropout;
  c.seed = rc.seed;
  c.Validate();
  return c;
}

OptimizerConfig OptimizerFor(const RunConfig& rc) {
  OptimizerConfig o;
  if (rc.optimizer == "sgd") {
    o.kind = OptimizerKind::kSgd;
  } else if (rc.optimizer == "adam") {
    o.kind = OptimizerKind::kAdam;
  } else {
    throw ValidationError("unknown optimizer " + rc.optimizer);
  }
  o.learning_rate = rc.learning_rate;
  o.batch_size = rc.batch_size;
  o.clip_norm = rc.clip_norm;
  return o;
}

}  // namespace

void ValidateTrainConfig(const RunConfig& c) {
  if (c.train_paths.empty()) throw ValidationError("--train is required");
  if (c.checkpoint.empty()) {
    throw ValidationError("--checkpoint (output directory) is required");
  }
  if (!(c.learning_rate > 0.0)) throw ValidationError("--lr must be > 0");
  if (c.epochs < 1) throw ValidationError("--epochs must be >= 1");
  if (c.batch_size < 1) throw ValidationError("--batch-size must be >= 1");
  if (c.null_fraction && (*c.null_fraction < 0.0 || *c.null_fraction > 1.0)) {
    throw ValidationError("--null-fraction must lie in [0, 1]");
  }
  if (c.beam_size < 1) throw ValidationError("--beam-size must be >= 1");
}

PreparedCorpus PrepareCorpus(std::vector<RawDocument> docs) {
  PreparedCorpus pc;
  pc.docs = std::move(docs);
  for (const auto& doc : pc.docs) {
    pc.sentences.push_back(Tokenize(doc, true));
    pc.tuples.push_back(
        DocumentTuples(doc, pc.sentences.back(), &pc.diagnostics));
  }
  return pc;
}

std::vector<Example> MakeExamples(const PreparedCorpus& corpus,
                                  const Vocabulary& vocab) {
  std::vector<Example> examples;
  examples.reserve(corpus.sentences.size());
  for (size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& sent = corpus.sentences[i];
    Example ex;
    ex.token_ids = vocab.Encode(sent.tokens);
    ex.gold = EncodeTuples(corpus.tuples[i], IndexSpaceFor(sent)).indices;
    examples.push_back(std::move(ex));
  }
  return examples;
}

GenerationConfig GenerationFor(const RunConfig& config) {
  GenerationConfig gen;
  gen.beam_size = config.beam_size;
  gen.constrained = !config.unconstrained;
  gen.max_tuples = config.max_tuples;
  gen.length_cap = kGroupSize * config.max_tuples + 1;
  gen.Validate();
  return gen;
}

EvaluationResult EvaluateModel(const Parameters& params,
                               const Vocabulary& vocab,
                               const PreparedCorpus& corpus,
                               const GenerationConfig& gen) {
  EvaluationResult result;
  std::vector<SentGraph> gold, pred;
  for (size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& sent = corpus.sentences[i];
    const auto ids = vocab.Encode(sent.tokens);
    const GenerationResult g = Generate(ids, params, params.config(), gen);
    if (!ValidateSequence(g.sequence.indices, g.sequence.space)) {
      ++result.invalid_sequences;
    }
    Prediction p = DecodePrediction(g.sequence, sent);
    SentGraph pg{sent.sent_id, {}};
    for (const auto& t : p.tuples) pg.tuples.push_back(ToGraphTuple(t, sent));
    pred.push_back(std::move(pg));
    gold.push_back(DocumentGraph(corpus.docs[i]));
    result.predictions.push_back(std::move(p.tuples));
  }
  result.report = SgF1(gold, pred);
  return result;
}

int CmdTrain(const RunConfig& config, std::ostream& out, std::ostream& err) {
  ValidateTrainConfig(config);
  std::vector<RawDocument> train_docs =
      ReadAll(config.train_paths, config.offsets);
  if (config.null_fraction) {
    train_docs = SubsampleNulls(train_docs, *config.null_fraction, config.seed);
  }
  const PreparedCorpus train = PrepareCorpus(std::move(train_docs));
  std::optional<PreparedCorpus> dev;
  if (!config.dev_path.empty()) {
    dev = PrepareCorpus(ReadCorpusFile(config.dev_path, config.offsets));
  }
  if (!train.diagnostics.empty()) {
    err << "train corpus: " << train.diagnostics.size()
        << " alignment diagnostics (first: "
        << train.diagnostics.front().message << ")\n";
  }

  const Vocabulary vocab = BuildVocabulary(train.sentences);
  const std::vector<Example> examples = MakeExamples(train, vocab);
  const ModelConfig model_config = ModelConfigFor(config, vocab.size());
  Parameters params(model_config);
  params.InitUniform(0.08, config.seed);
  Trainer trainer(&params, OptimizerFor(config), config.seed);
  const GenerationConfig gen = GenerationFor(config);

  std::filesystem::create_directories(config.checkpoint);
  const std::filesystem::path dir(config.checkpoint);
  const std::string log_path = (dir / "metrics.jsonl").string();
  std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
  if (!log) throw Error("cannot write " + log_path);

  ordered_json meta_base;
  meta_base["train_files"] = config.train_paths;
  meta_base["dev_file"] = config.dev_path;
  meta_base["beam_size"] = config.beam_size;
  meta_base["max_tuples"] = config.max_tuples;

  auto save = [&](const std::string& name, int epoch,
                  std::optional<double> dev_f1) {
    Checkpoint ckpt;
    ckpt.config = model_config;
    ckpt.vocabulary = vocab;
    ckpt.params = params;
    ckpt.epoch = epoch;
    ckpt.seed = config.seed;
    ordered_json meta = meta_base;
    if (dev_f1) meta["dev_sg_f1"] = *dev_f1;
    ckpt.metadata_json = meta.dump();
    SaveCheckpoint(ckpt, (dir / name).string());
  };

  double best_f1 = -1.0;
  double best_loss = INFINITY;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const EpochMetrics m = trainer.TrainEpoch(examples);
    ordered_json line;
    line["epoch"] = epoch;
    line["mean_loss"] = m.mean_loss;
    line["steps"] = m.steps;
    bool improved = false;
    std::optional<double> dev_f1;
    if (dev) {
      const EvaluationResult ev = EvaluateModel(params, vocab, *dev, gen);
      dev_f1 = ev.report.f1;
      line["dev_precision"] = ev.report.precision;
      line["dev_recall"] = ev.report.recall;
      line["dev_sg_f1"] = ev.report.f1;
      improved = ev.report.f1 > best_f1;
      if (improved) best_f1 = ev.report.f1;
    } else {
      improved = m.mean_loss < best_loss;
    }
    best_loss = std::min(best_loss, m.mean_loss);
    line["best"] = improved;
    log << line.dump() << "\n";
    log.flush();
    if (improved) save("best.ckpt", epoch, dev_f1);
    err << "epoch " << epoch << " loss " << m.mean_loss;
    if (dev_f1) err << " dev_sg_f1 " << *dev_f1;
    err << "\n";
    if (epoch == config.epochs) save("final.ckpt", epoch, dev_f1);
  }
  out << (dir / "best.ckpt").string() << "\n";
  return kExitOk;
}

int CmdPredict(const RunConfig& config, std::ostream& out, std::ostream&) {
  if (config.checkpoint.empty()) throw ValidationError("--checkpoint required");
  if (config.test_path.empty()) throw ValidationError("--test required");
  const Checkpoint ckpt = LoadCheckpoint(config.checkpoint);
  const PreparedCorpus corpus =
      PrepareCorpus(ReadCorpusFile(config.test_path, config.offsets));
  const GenerationConfig gen = GenerationFor(config);
  const EvaluationResult ev =
      EvaluateModel(ckpt.params, ckpt.vocabulary, corpus, gen);
  WriteOutput(config,
              WritePredictions(corpus.sentences, ev.predictions, config.offsets),
              out);
  return kExitOk;
}

int CmdEval(const RunConfig& config, std::ostream& out, std::ostream&) {
  const std::string gold_path =
      config.gold_path.empty() ? config.test_path : config.gold_path;
  if (gold_path.empty() || config.pred_path.empty()) {
    throw ValidationError("--gold (or --test) and --pred are required");
  }
  const auto gold_docs = ReadCorpusFile(gold_path, config.offsets);
  const auto pred_docs = ReadCorpusFile(config.pred_path, config.offsets);
  std::vector<SentGraph> gold, pred;
  for (const auto& d : gold_docs) gold.push_back(DocumentGraph(d));
  for (const auto& d : pred_docs) pred.push_back(DocumentGraph(d));
  const SGF1Report report = SgF1(gold, pred);
  WriteOutput(config,
              config.format == "text" ? ReportTable(report) : ReportJson(report),
              out);
  return kExitOk;
}

int CmdStats(const RunConfig& config, std::ostream& out, std::ostream&) {
  std::vector<std::string> paths = config.train_paths;
  if (!config.test_path.empty()) paths.push_back(config.test_path);
  if (paths.empty()) throw ValidationError("no corpus file given");
  std::string text;
  if (config.format == "csv") {
    const CorpusStats stats = ComputeStats(ReadAll(paths, config.offsets));
    text = LengthHistogramCsv(stats);
  } else {
    ordered_json all = ordered_json::array();
    for (const auto& p : paths) {
      const CorpusStats s = ComputeStats(ReadCorpusFile(p, config.offsets));
      ordered_json j;
      j["file"] = p;
      j["n_sentences"] = s.n_sentences;
      j["n_null"] = s.n_null;
      j["null_fraction"] = s.null_fraction;
      std::ostringstream pct;
      pct << std::fixed << std::setprecision(2) << 100.0 * s.null_fraction;
      j["null_percent"] = pct.str();
      j["n_tuples"] = s.n_tuples;
      ordered_json hist = ordered_json::object();
      for (const auto& [len, count] : s.token_length_histogram) {
        hist[std::to_string(len)] = count;
      }
      j["token_length_histogram"] = hist;
      all.push_back(std::move(j));
    }
    text = all.dump(2) + "\n";
  }
  WriteOutput(config, text, out);
  return kExitOk;
}

int CmdSynth(const RunConfig& config, std::ostream& out, std::ostream&) {
  if (config.n_sentences < 0) throw ValidationError("--n-sentences < 0");
  if (config.synth_null_fraction < 0.0 || config.synth_null_fraction > 1.0) {
    throw ValidationError("--null-fraction must lie in [0, 1]");
  }
  SynthConfig sc;
  sc.n_sentences = config.n_sentences;
  sc.seed = config.seed;
  sc.null_fraction = config.synth_null_fraction;
  WriteOutput(config, SerializeCorpus(GenerateSyntheticCorpus(sc)), out);
  return kExitOk;
}

int RunGuarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << " (byte " << e.byte_position() << ")\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

std::string ReportJson(const SGF1Report& report) {
  return ReportObject(report).dump(2) + "\n";
}

std::string ReportTable(const SGF1Report& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "metric              value\n";
  os << "precision           " << report.precision << "\n";
  os << "recall              " << report.recall << "\n";
  os << "sentiment_graph_f1  " << report.f1 << "\n";
  os << "n_predicted         " << report.n_predicted << "\n";
  os << "n_gold              " << report.n_gold << "\n";
  return os.str();
}

}  // namespace ssa::cli
