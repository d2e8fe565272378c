// Copyright 2026 The ScionFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "scionfl/experiments/sweep.h"
#include "scionfl/robust/attack.h"
#include "scionfl/robust/defense.h"

namespace scionfl::experiments {

// Desk-scale two-class task: Gaussian blobs with a logistic-regression
// model (feature_dim weights + bias, padded to a power of two).
struct FlTask {
  size_t feature_dim = 1023;  // model dimension 1024 with the bias
  size_t population = 50;     // N
  size_t clients_per_round = 10;
  size_t samples_per_client = 192;
  size_t test_samples = 512;
  double class_separation = 1.8;
  double feature_noise = 1.4;
  // Per-client class imbalance; 0 gives iid shards, 1 single-class shards.
  double heterogeneity = 0.2;
  double client_lr = 0.02;
  double server_lr = 1.0;
  int local_steps = 20;
  size_t batch = 64;
  int rounds = 100;
};

// How a round's updates are combined: through the conversion-noise pipeline
// simulation, or as the exact mean of the quantized submissions (the path
// the attack/defense arms share).
enum class FlAggregator { kPipeline, kQuantizedExact };

struct TrainConfig {
  PipelineConfig pipeline;
  FlAggregator aggregator = FlAggregator::kPipeline;
  bool quantize_updates = true;  // false: plain FedAvg on raw updates
  double momentum = 0.9;
  uint64_t seed = 7;
};

struct TrainResult {
  std::vector<double> accuracy;  // per round, on the held-out set
  std::vector<double> model;
  bool diverged = false;
};

TrainResult run_fl_training(const FlTask& task, const TrainConfig& cfg);

// Internals shared with the attack/defense experiment. The trainer owns the
// dataset and the deterministic per-round randomness so that separate arms
// replay identical client selections and quantization draws.
class FlTrainer {
 public:
  FlTrainer(const FlTask& task, const TrainConfig& cfg);

  size_t model_dim() const { return dim_; }
  const std::vector<double>& model() const { return model_; }

  std::vector<size_t> select_clients(int round) const;
  // Local training update (pseudo-gradient G - w_local) for one client.
  std::vector<double> client_update(int round, size_t client) const;
  quantize::QuantizedVector quantize_update(int round, size_t client,
                                            const std::vector<double>& update,
                                            uint64_t content_tag) const;
  uint64_t round_rotation_seed(int round) const;

  // Applies the aggregated mean update through the momentum optimizer.
  void apply_aggregate(const std::vector<double>& mean_update);

  double evaluate() const;
  bool diverged() const { return diverged_; }

  // Plain (non-secure) round used by the baseline paths.
  void train_round(int round);

 private:
  FlTask task_;
  TrainConfig cfg_;
  size_t dim_;
  std::vector<std::vector<double>> features_;  // per sample
  std::vector<int> labels_;
  std::vector<std::vector<size_t>> shards_;  // per client sample indices
  std::vector<std::vector<double>> test_features_;
  std::vector<int> test_labels_;
  std::vector<double> model_;
  std::vector<double> velocity_;
  bool diverged_ = false;
};

}  // namespace scionfl::experiments
