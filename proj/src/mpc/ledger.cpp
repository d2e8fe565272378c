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

#include "scionfl/mpc/ledger.h"

#include <algorithm>
#include <sstream>

namespace scionfl::mpc {

void CostLedger::record(Phase phase, int from, int to, uint64_t bits) {
  std::lock_guard<std::mutex> lock(mu_);
  Entry e;
  e.seq = seq_[{from, to}]++;
  e.phase = phase;
  e.from = from;
  e.to = to;
  e.bits = bits;
  entries_.push_back(e);
}

uint64_t CostLedger::total_bits(Phase phase) const {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t sum = 0;
  for (const auto& e : entries_) {
    if (e.phase == phase) sum += e.bits;
  }
  return sum;
}

uint64_t CostLedger::total_bits() const {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t sum = 0;
  for (const auto& e : entries_) sum += e.bits;
  return sum;
}

uint64_t CostLedger::pair_bits(int from, int to, Phase phase) const {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t sum = 0;
  for (const auto& e : entries_) {
    if (e.from == from && e.to == to && e.phase == phase) sum += e.bits;
  }
  return sum;
}

uint64_t CostLedger::client_bits() const {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t sum = 0;
  for (const auto& e : entries_) {
    if (e.from == kClientParty) sum += e.bits;
  }
  return sum;
}

uint64_t CostLedger::server_bits(Phase phase) const {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t sum = 0;
  for (const auto& e : entries_) {
    if (e.from != kClientParty && e.phase == phase) sum += e.bits;
  }
  return sum;
}

std::vector<CostLedger::Entry> CostLedger::transcript() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<Entry> out = entries_;
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.phase, a.from, a.to, a.seq) <
           std::tie(b.phase, b.from, b.to, b.seq);
  });
  return out;
}

std::string CostLedger::transcript_jsonl() const {
  std::ostringstream oss;
  for (const auto& e : transcript()) {
    oss << "{\"round\":" << e.seq << ",\"phase\":\"" << phase_name(e.phase)
        << "\",\"from\":" << e.from << ",\"to\":" << e.to
        << ",\"bits\":" << e.bits << "}\n";
  }
  return oss.str();
}

void CostLedger::reset() {
  std::lock_guard<std::mutex> lock(mu_);
  seq_.clear();
  entries_.clear();
  ot_instances_ = 0;
}

}  // namespace scionfl::mpc
