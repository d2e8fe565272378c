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

#include "scionfl/experiments/fl.h"

#include <algorithm>
#include <cmath>

#include "scionfl/base.h"

namespace scionfl::experiments {
namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

FlTrainer::FlTrainer(const FlTask& task, const TrainConfig& cfg)
    : task_(task), cfg_(cfg), dim_(task.feature_dim + 1) {
  SCIONFL_ENFORCE(task.population >= task.clients_per_round,
                  "population smaller than the per-round selection");
  Prng data_rng(mix_key(cfg.seed, 0xda7a));

  // Class mean along a random unit direction.
  std::vector<double> center(task_.feature_dim);
  double norm = 0.0;
  for (double& v : center) {
    v = data_rng.next_gaussian();
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : center) v *= task_.class_separation / (2.0 * norm);

  auto draw_sample = [&](Prng& rng, int label, std::vector<double>& x) {
    x.resize(task_.feature_dim);
    for (size_t j = 0; j < task_.feature_dim; ++j) {
      double mu = label == 1 ? center[j] : -center[j];
      x[j] = mu + task_.feature_noise * rng.next_gaussian();
    }
  };

  shards_.resize(task_.population);
  for (size_t c = 0; c < task_.population; ++c) {
    Prng rng(mix_key(mix_key(cfg.seed, 0x5a0d), c));
    // Class mix per client: 0.5 +- heterogeneity/2.
    double p1 = 0.5 + task_.heterogeneity * (rng.next_unit() - 0.5);
    for (size_t s = 0; s < task_.samples_per_client; ++s) {
      int label = rng.next_unit() < p1 ? 1 : 0;
      std::vector<double> x;
      draw_sample(rng, label, x);
      shards_[c].push_back(features_.size());
      features_.push_back(std::move(x));
      labels_.push_back(label);
    }
  }

  Prng test_rng(mix_key(cfg.seed, 0x7e57));
  for (size_t s = 0; s < task_.test_samples; ++s) {
    int label = (s % 2 == 0) ? 1 : 0;
    std::vector<double> x;
    draw_sample(test_rng, label, x);
    test_features_.push_back(std::move(x));
    test_labels_.push_back(label);
  }

  model_.assign(dim_, 0.0);
  velocity_.assign(dim_, 0.0);
}

std::vector<size_t> FlTrainer::select_clients(int round) const {
  Prng rng(mix_key(mix_key(cfg_.seed, 0x5e1e), round));
  std::vector<size_t> pool(task_.population);
  for (size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  // Partial Fisher-Yates: uniform sample without replacement.
  std::vector<size_t> chosen;
  for (size_t k = 0; k < task_.clients_per_round; ++k) {
    size_t j = k + rng.next_below(pool.size() - k);
    std::swap(pool[k], pool[j]);
    chosen.push_back(pool[k]);
  }
  return chosen;
}

std::vector<double> FlTrainer::client_update(int round, size_t client) const {
  Prng rng(mix_key(mix_key(mix_key(cfg_.seed, 0x10ca), round), client));
  std::vector<double> w = model_;
  const auto& shard = shards_[client];
  for (int step = 0; step < task_.local_steps; ++step) {
    std::vector<double> grad(dim_, 0.0);
    for (size_t b = 0; b < task_.batch; ++b) {
      size_t idx = shard[rng.next_below(shard.size())];
      const auto& x = features_[idx];
      double z = w[dim_ - 1];  // bias
      for (size_t j = 0; j < task_.feature_dim; ++j) z += w[j] * x[j];
      double err = sigmoid(z) - double(labels_[idx]);
      for (size_t j = 0; j < task_.feature_dim; ++j) grad[j] += err * x[j];
      grad[dim_ - 1] += err;
    }
    const double scale = task_.client_lr / double(task_.batch);
    for (size_t j = 0; j < dim_; ++j) w[j] -= scale * grad[j];
  }
  std::vector<double> update(dim_);
  for (size_t j = 0; j < dim_; ++j) update[j] = model_[j] - w[j];
  return update;
}

uint64_t FlTrainer::round_rotation_seed(int round) const {
  return mix_key(mix_key(cfg_.seed, 0x2070), round);
}

quantize::QuantizedVector FlTrainer::quantize_update(
    int round, size_t client, const std::vector<double>& update,
    uint64_t content_tag) const {
  // The draw stream is keyed by the submitted content tag so that arms that
  // replay the same honest update reproduce the same bits.
  Prng rng(mix_key(mix_key(mix_key(cfg_.seed, 0x9b17), round),
                   mix_key(client, content_tag)));
  quantize::QuantizeOptions opts;
  opts.kashin = cfg_.pipeline.kashin;
  opts.min_chunk = cfg_.pipeline.min_chunk;
  switch (cfg_.pipeline.scheme) {
    case quantize::Scheme::kSQ:
      return quantize::sq_quantize(update, rng, opts);
    case quantize::Scheme::kHSQ:
      return quantize::hsq_quantize(update, round_rotation_seed(round), rng,
                                    opts);
    case quantize::Scheme::kKSQ:
      return quantize::ksq_quantize(update, round_rotation_seed(round), rng,
                                    opts);
  }
  SCIONFL_ENFORCE(false, "unreachable scheme");
}

void FlTrainer::apply_aggregate(const std::vector<double>& mean_update) {
  for (double v : mean_update) {
    if (!std::isfinite(v)) {
      diverged_ = true;
      return;
    }
  }
  for (size_t j = 0; j < dim_; ++j) {
    velocity_[j] = cfg_.momentum * velocity_[j] + mean_update[j];
    model_[j] -= task_.server_lr * velocity_[j];
  }
}

double FlTrainer::evaluate() const {
  size_t correct = 0;
  for (size_t s = 0; s < test_features_.size(); ++s) {
    const auto& x = test_features_[s];
    double z = model_[dim_ - 1];
    for (size_t j = 0; j < task_.feature_dim; ++j) z += model_[j] * x[j];
    int pred = z > 0.0 ? 1 : 0;
    correct += (pred == test_labels_[s]) ? 1 : 0;
  }
  return double(correct) / double(test_features_.size());
}

void FlTrainer::train_round(int round) {
  auto selected = select_clients(round);
  std::vector<std::vector<double>> updates;
  updates.reserve(selected.size());
  for (size_t c : selected) updates.push_back(client_update(round, c));

  std::vector<double> mean(dim_, 0.0);
  if (!cfg_.quantize_updates) {
    for (const auto& u : updates) {
      for (size_t j = 0; j < dim_; ++j) mean[j] += u[j];
    }
    for (double& v : mean) v /= double(updates.size());
  } else if (cfg_.aggregator == FlAggregator::kPipeline) {
    Prng agg_rng(mix_key(mix_key(cfg_.seed, 0xa66), round));
    mean = simulate_quantized_mean(updates, cfg_.pipeline,
                                   round_rotation_seed(round), agg_rng);
  } else {
    std::vector<quantize::QuantizedVector> qvs;
    qvs.reserve(updates.size());
    for (size_t k = 0; k < selected.size(); ++k) {
      qvs.push_back(quantize_update(round, selected[k], updates[k], 0));
    }
    mean = robust::aggregate_quantized(qvs);
  }
  apply_aggregate(mean);
}

TrainResult run_fl_training(const FlTask& task, const TrainConfig& cfg) {
  FlTrainer trainer(task, cfg);
  TrainResult out;
  for (int round = 0; round < task.rounds && !trainer.diverged(); ++round) {
    trainer.train_round(round);
    out.accuracy.push_back(trainer.evaluate());
  }
  out.model = trainer.model();
  out.diverged = trainer.diverged();
  return out;
}

}  // namespace scionfl::experiments
