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

#ifndef SSA_TRAINER_HPP_
#define SSA_TRAINER_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ssa/model.hpp"

namespace ssa {

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSgd;
  double learning_rate = 5e-5;
  int batch_size = 16;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Global gradient-norm clip; 0 disables.
  double clip_norm = 0.0;
};

// One supervised pair: encoder token ids and the gold index sequence.
struct Example {
  std::vector<int> token_ids;
  std::vector<int> gold;
};

struct EpochMetrics {
  int epoch = 0;
  double mean_loss = 0.0;
  int64_t steps = 0;
};

class Optimizer {
 public:
  Optimizer(const OptimizerConfig& config, const ad::ParameterSet& params);

  // Applies one update from the current gradient buffers.
  void Step(ad::ParameterSet* params);
  const OptimizerConfig& config() const { return config_; }

 private:
  OptimizerConfig config_;
  std::vector<ad::Matrix> m_, v_;
  int64_t t_ = 0;
};

// Scales gradients so their global L2 norm is at most max_norm; returns the
// norm before clipping.
double ClipGradNorm(ad::ParameterSet* params, double max_norm);

class Trainer {
 public:
  Trainer(Parameters* params, const OptimizerConfig& optimizer, uint64_t seed);

  // Shuffles with the trainer's RNG, then runs mini-batch updates; each
  // update uses the mean gradient of its examples. Throws TrainingError on a
  // non-finite loss or gradient.
  EpochMetrics TrainEpoch(std::span<const Example> examples);

  int epochs_done() const { return epoch_; }

 private:
  Parameters* params_;
  Optimizer optimizer_;
  std::mt19937_64 shuffle_rng_;
  std::mt19937_64 dropout_rng_;
  int epoch_ = 0;
};

// Fisher-Yates with an explicit bounded draw (library independent).
void DeterministicShuffle(std::vector<size_t>* items, std::mt19937_64* rng);

}  // namespace ssa

#endif  // SSA_TRAINER_HPP_
