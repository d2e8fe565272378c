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

#include "scionfl/experiments/defense_run.h"

#include <algorithm>

#include "scionfl/base.h"

namespace scionfl::experiments {

DefenseExperimentResult run_defense_experiment(
    const DefenseExperimentConfig& cfg) {
  SCIONFL_ENFORCE(cfg.num_malicious * 2 < cfg.task.population,
                  "malicious fraction must stay below one half");
  TrainConfig train = cfg.train;
  train.aggregator = FlAggregator::kQuantizedExact;
  train.quantize_updates = true;

  FlTrainer baseline(cfg.task, train);
  FlTrainer attacked(cfg.task, train);
  FlTrainer defended(cfg.task, train);

  auto is_malicious = [&](size_t c) { return c < cfg.num_malicious; };

  DefenseExperimentResult out;
  for (int round = 0; round < cfg.task.rounds; ++round) {
    baseline.train_round(round);
    out.baseline_accuracy.push_back(baseline.evaluate());

    // Both attack arms share the selection and the honest updates; only the
    // submissions of the malicious clients differ.
    auto run_arm = [&](FlTrainer& trainer, bool defend, int* selected_mal,
                       int* excluded_mal) {
      auto selected = trainer.select_clients(round);
      std::vector<std::vector<double>> honest(selected.size());
      for (size_t k = 0; k < selected.size(); ++k) {
        honest[k] = trainer.client_update(round, selected[k]);
      }
      // Coalition knowledge: the attackers simulate benign behaviour on
      // their own shards and solve for the largest admissible deviation.
      std::vector<std::vector<double>> surrogates;
      for (size_t c = 0; c < cfg.num_malicious; ++c) {
        surrogates.push_back(trainer.client_update(round, c));
      }
      auto crafted = robust::minmax_attack(surrogates, cfg.attack);

      std::vector<quantize::QuantizedVector> submissions;
      int n_mal = 0;
      for (size_t k = 0; k < selected.size(); ++k) {
        const bool mal = is_malicious(selected[k]);
        n_mal += mal ? 1 : 0;
        const auto& payload = mal ? crafted.gradient : honest[k];
        submissions.push_back(trainer.quantize_update(
            round, selected[k], payload, mal ? 1 : 0));
      }
      if (selected_mal) *selected_mal = n_mal;

      if (!defend) {
        trainer.apply_aggregate(robust::aggregate_quantized(submissions));
        return;
      }
      auto outcome = robust::aura_defend(submissions, cfg.defense);
      int excluded = 0;
      for (size_t idx : outcome.excluded) {
        if (is_malicious(selected[idx])) ++excluded;
      }
      if (excluded_mal) *excluded_mal = excluded;
      trainer.apply_aggregate(outcome.aggregate);
    };

    int sel_mal = 0;
    run_arm(attacked, false, &sel_mal, nullptr);
    out.attacked_accuracy.push_back(attacked.evaluate());

    int exc_mal = 0;
    run_arm(defended, true, &sel_mal, &exc_mal);
    out.defended_accuracy.push_back(defended.evaluate());

    out.selected_attackers.push_back(sel_mal);
    out.excluded_attackers.push_back(exc_mal);
    out.total_selected_attackers += sel_mal;
    out.total_excluded_attackers += exc_mal;
  }
  return out;
}

}  // namespace scionfl::experiments
