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

#include <string>
#include <vector>

namespace scionfl::robust {

enum class Perturbation { kInverseUnit, kInverseStd, kInverseSign };

Perturbation perturbation_from_name(const std::string& name);

struct AttackConfig {
  Perturbation perturbation = Perturbation::kInverseUnit;
  double tolerance = 1e-5;
  int bisection_steps = 64;
  double malicious_fraction = 0.2;
};

struct MinMaxResult {
  std::vector<double> gradient;  // mean + gamma * perturbation
  double gamma = 0.0;
};

// Largest gamma such that the crafted update stays within the maximum
// pairwise distance of the benign set:
//   max_i ||mean + gamma*p - g_i||_2 <= max_{i,j} ||g_i - g_j||_2.
// gamma = 0 is always feasible (the mean sits inside the hull), the bound is
// bracketed by doubling and then bisected.
MinMaxResult minmax_attack(const std::vector<std::vector<double>>& benign,
                           const AttackConfig& cfg = {});

std::vector<double> perturbation_vector(
    const std::vector<std::vector<double>>& benign, Perturbation kind);

}  // namespace scionfl::robust
