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

#include "ssa/trainer.hpp"

#include <cmath>
#include <numeric>

namespace ssa {

Optimizer::Optimizer(const OptimizerConfig& config,
                     const ad::ParameterSet& params)
    : config_(config) {
  if (config.batch_size < 1) {
    throw ValidationError("batch_size must be >= 1");
  }
  if (config.kind == OptimizerKind::kAdam) {
    for (const auto& t : params) {
      m_.push_back(ad::Matrix::Zero(t->value.rows(), t->value.cols()));
      v_.push_back(ad::Matrix::Zero(t->value.rows(), t->value.cols()));
    }
  }
}

void Optimizer::Step(ad::ParameterSet* params) {
  const double lr = config_.learning_rate;
  if (config_.kind == OptimizerKind::kSgd) {
    for (auto& t : *params) t->value -= lr * t->grad;
    return;
  }
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (auto& t : *params) {
    auto& m = m_[t->id];
    auto& v = v_[t->id];
    m = b1 * m + (1.0 - b1) * t->grad;
    v = b2 * v + (1.0 - b2) * t->grad.cwiseAbs2();
    t->value.array() -=
        lr * (m.array() / c1) / ((v.array() / c2).sqrt() + config_.epsilon);
  }
}

double ClipGradNorm(ad::ParameterSet* params, double max_norm) {
  double sq = 0.0;
  for (const auto& t : *params) sq += t->grad.squaredNorm();
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    for (auto& t : *params) t->grad *= s;
  }
  return norm;
}

void DeterministicShuffle(std::vector<size_t>* items, std::mt19937_64* rng) {
  for (size_t i = items->size(); i > 1; --i) {
    const uint64_t n = i;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = (*rng)();
    } while (x >= limit);
    std::swap((*items)[i - 1], (*items)[x % n]);
  }
}

Trainer::Trainer(Parameters* params, const OptimizerConfig& optimizer,
                 uint64_t seed)
    : params_(params),
      optimizer_(optimizer, params->set()),
      shuffle_rng_(seed),
      dropout_rng_(seed ^ 0x9E3779B97F4A7C15ULL) {}

EpochMetrics Trainer::TrainEpoch(std::span<const Example> examples) {
  EpochMetrics metrics;
  metrics.epoch = ++epoch_;
  if (examples.empty()) return metrics;

  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  DeterministicShuffle(&order, &shuffle_rng_);

  const ModelConfig& config = params_->config();
  const size_t batch = static_cast<size_t>(optimizer_.config().batch_size);
  std::mt19937_64* rng = config.dropout > 0.0 ? &dropout_rng_ : nullptr;
  double total = 0.0;
  for (size_t begin = 0; begin < order.size(); begin += batch) {
    const size_t end = std::min(order.size(), begin + batch);
    params_->ZeroGrad();
    for (size_t i = begin; i < end; ++i) {
      const Example& ex = examples[order[i]];
      LossContext ctx =
          ForwardLoss(ex.token_ids, ex.gold, *params_, config, rng);
      if (!std::isfinite(ctx.loss())) {
        throw TrainingError("non-finite loss at epoch " +
                            std::to_string(epoch_) + ", example " +
                            std::to_string(order[i]));
      }
      total += ctx.loss();
      ctx.Backward(params_);
    }
    const double inv = 1.0 / static_cast<double>(end - begin);
    for (auto& t : params_->set()) t->grad *= inv;
    const double norm =
        ClipGradNorm(&params_->set(), optimizer_.config().clip_norm);
    if (!std::isfinite(norm)) {
      throw TrainingError("non-finite gradient at epoch " +
                          std::to_string(epoch_));
    }
    optimizer_.Step(&params_->set());
    ++metrics.steps;
  }
  metrics.mean_loss = total / static_cast<double>(examples.size());
  return metrics;
}

}  // namespace ssa
