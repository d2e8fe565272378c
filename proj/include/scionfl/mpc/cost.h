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

#include "scionfl/bitconv.h"
#include "scionfl/mpc/cost_model.h"
#include "scionfl/mpc/secagg.h"

namespace scionfl::mpc {

// Black-box cost structure per aggregated dimension for n clients, counted
// in BitA/Mult invocations split by phase.
struct SymbolicCost {
  uint64_t bita_pre = 0;
  uint64_t mult_pre = 0;
  uint64_t bita_on = 0;
  uint64_t mult_on = 0;

  std::string to_string() const;
  bool operator==(const SymbolicCost&) const = default;
};

SymbolicCost symbolic_cost(Approach approach, uint64_t n);

// Concrete inter-server traffic for one round under the documented model:
//   BitA_pre = (5 exact | 3 approx) OTs per payload bit at ot_bits each
//   Mult_pre = mult_triple_bits per secure multiplication
//   BitA_on  = one relayed opening, (2q-1) ring elements
//   Mult_on  = one output reveal toward S1, (q-1) ring elements
struct ConcreteCost {
  uint64_t offline_bits = 0;
  uint64_t online_bits = 0;

  double offline_mib() const;
  double online_mib() const;
};

ConcreteCost cost_report(Approach approach, bitconv::ConvMode mode,
                         uint64_t clients, uint64_t payload_bits, int q = 3,
                         const CostModel& cost = {});

// Boolean-sum workload (no scale multiplications): our exact and approximate
// conversions against a daBit-style conversion that needs 12 OTs per bit.
struct BitSumComparison {
  double ours_exact_mib = 0.0;
  double ours_approx_mib = 0.0;
  double dabit_style_mib = 0.0;
};

BitSumComparison bit_sum_comparison(uint64_t clients, uint64_t m_bits,
                                    const CostModel& cost = {});

}  // namespace scionfl::mpc
