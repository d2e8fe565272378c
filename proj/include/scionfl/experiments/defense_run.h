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

#include "scionfl/experiments/fl.h"

namespace scionfl::experiments {

struct DefenseExperimentConfig {
  FlTask task;
  TrainConfig train;  // aggregator is forced to the exact quantized path
  robust::AttackConfig attack;
  robust::DefenseConfig defense;
  size_t num_malicious = 10;
};

struct DefenseExperimentResult {
  std::vector<double> baseline_accuracy;   // nobody attacks
  std::vector<double> attacked_accuracy;   // attack, no defense
  std::vector<double> defended_accuracy;   // attack + filtering
  std::vector<int> selected_attackers;     // per round
  std::vector<int> excluded_attackers;     // per round (defended arm)
  uint64_t total_selected_attackers = 0;
  uint64_t total_excluded_attackers = 0;

  double exclusion_rate() const {
    return total_selected_attackers == 0
               ? 0.0
               : double(total_excluded_attackers) /
                     double(total_selected_attackers);
  }
};

// Three arms over identical client selections and honest updates: the
// malicious clients (ids 0..num_malicious-1) submit independently quantized
// copies of the crafted gradient in the attack arms.
DefenseExperimentResult run_defense_experiment(
    const DefenseExperimentConfig& cfg);

}  // namespace scionfl::experiments
