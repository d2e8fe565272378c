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

#include "scionfl/mpc/cost.h"

#include <sstream>

#include "scionfl/base.h"
#include "scionfl/mpc/ledger.h"

namespace scionfl::mpc {
namespace {

uint64_t ots_per_bit(bitconv::ConvMode mode) {
  return mode == bitconv::ConvMode::kExact ? 5 : 3;
}

}  // namespace

std::string SymbolicCost::to_string() const {
  auto term = [](uint64_t c, const char* sym) -> std::string {
    if (c == 0) return "";
    std::ostringstream oss;
    if (c == 1) {
      oss << sym;
    } else {
      oss << c << "*" << sym;
    }
    return oss.str();
  };
  std::ostringstream oss;
  oss << "offline: ";
  oss << term(bita_pre, "BitA_pre");
  if (mult_pre) oss << " + " << term(mult_pre, "Mult_pre");
  oss << "; online: ";
  bool first = true;
  if (bita_on) {
    oss << term(bita_on, "BitA_on");
    first = false;
  }
  if (mult_on) {
    if (!first) oss << " + ";
    oss << term(mult_on, "Mult_on");
  }
  return oss.str();
}

SymbolicCost symbolic_cost(Approach approach, uint64_t n) {
  switch (approach) {
    case Approach::kOne:
      return {n, n, n, n};
    case Approach::kTwo:
      return {n, n, 0, 1};
    case Approach::kThree:
      return {n, 1, 0, 1};
    case Approach::kGlobal:
      return {n, 0, 0, 1};
  }
  return {};
}

double ConcreteCost::offline_mib() const {
  return CostLedger::to_mib(offline_bits);
}

double ConcreteCost::online_mib() const {
  return CostLedger::to_mib(online_bits);
}

ConcreteCost cost_report(Approach approach, bitconv::ConvMode mode,
                         uint64_t clients, uint64_t payload_bits, int q,
                         const CostModel& cost) {
  SCIONFL_ENFORCE(clients >= 1 && payload_bits >= 1 && q >= 2,
                  "invalid cost-report arguments");
  SymbolicCost sym = symbolic_cost(approach, clients);
  const uint64_t bita_pre_bits = ots_per_bit(mode) * cost.ot_bits;
  const uint64_t open_all_bits = (2 * uint64_t(q) - 1) * cost.ring_bits;
  const uint64_t open_out_bits = (uint64_t(q) - 1) * cost.ring_bits;
  ConcreteCost out;
  out.offline_bits = payload_bits * (sym.bita_pre * bita_pre_bits +
                                     sym.mult_pre * cost.mult_triple_bits);
  out.online_bits = payload_bits *
                    (sym.bita_on * open_all_bits + sym.mult_on * open_out_bits);
  return out;
}

BitSumComparison bit_sum_comparison(uint64_t clients, uint64_t m_bits,
                                    const CostModel& cost) {
  BitSumComparison out;
  const double total_bits = double(clients) * double(m_bits);
  out.ours_exact_mib = CostLedger::to_mib(
      static_cast<uint64_t>(total_bits * 5.0 * double(cost.ot_bits)));
  out.ours_approx_mib = CostLedger::to_mib(
      static_cast<uint64_t>(total_bits * 3.0 * double(cost.ot_bits)));
  out.dabit_style_mib = CostLedger::to_mib(
      static_cast<uint64_t>(total_bits * 12.0 * double(cost.ot_bits)));
  return out;
}

}  // namespace scionfl::mpc
