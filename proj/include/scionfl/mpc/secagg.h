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
#include <string>
#include <vector>

#include "scionfl/bitconv.h"
#include "scionfl/mpc/protocols.h"
#include "scionfl/mpc/runtime.h"

namespace scionfl::mpc {

enum class Approach { kOne, kTwo, kThree, kGlobal };

std::string approach_name(Approach a);
Approach approach_from_name(const std::string& name);

// Client interaction: the client derives the mask from shared randomness,
// uploads one masked value to S1, and S1 relays it to the other servers.
// Servers recover their mask shares locally from the same randomness.
Ring client_share_arith(double value, int q, const SharedRandomness& shared,
                        uint64_t tag, CostLedger& ledger);
uint8_t client_share_bit(uint8_t bit, int q, const SharedRandomness& shared,
                         uint64_t tag, CostLedger& ledger);
Ring server_lambda_arith(int server, const SharedRandomness& shared,
                         uint64_t tag);
uint8_t server_lambda_bit(int server, const SharedRandomness& shared,
                          uint64_t tag);

// One aggregation round over quantized triples (B, U, V). Outputs the
// row-aggregate (sum over clients) per coordinate.
struct SecaggInstance {
  std::vector<std::vector<uint8_t>> bits;  // n x m payload bits
  std::vector<double> s_min;               // per-client u
  std::vector<double> s_max;               // per-client v
  double global_min = 0.0;                 // kGlobal only
  double global_max = 1.0;
};

struct SecaggRun {
  std::vector<double> sum;  // 1 x m
  uint64_t preprocessing_bits = 0;
  uint64_t input_bits = 0;
  uint64_t online_bits = 0;
  uint64_t ot_instances = 0;
  std::string transcript_jsonl;
};

SecaggRun run_secagg(Approach approach, bitconv::ConvMode mode,
                     const SecaggInstance& instance, uint64_t seed,
                     Scheduler scheduler = Scheduler::kThreaded,
                     CostModel cost = {}, int q = 3);

}  // namespace scionfl::mpc
