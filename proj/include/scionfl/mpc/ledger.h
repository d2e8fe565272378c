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
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace scionfl::mpc {

// kInput covers client uploads and the designated server's relay of masked
// inputs; it is accounted separately so the online phase reflects protocol
// openings only.
enum class Phase { kPreprocessing, kInput, kOnline };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::kPreprocessing:
      return "preprocessing";
    case Phase::kInput:
      return "input";
    case Phase::kOnline:
      return "online";
  }
  return "online";
}

// Party index for clients in ledger entries (client -> server upload).
inline constexpr int kClientParty = -1;

// Bit-exact communication ledger. Every message is charged before delivery;
// updates are serialized so party threads can record concurrently.
class CostLedger {
 public:
  struct Entry {
    uint64_t seq = 0;  // per-(from,to) message ordinal
    Phase phase = Phase::kOnline;
    int from = 0;
    int to = 0;
    uint64_t bits = 0;
  };

  void record(Phase phase, int from, int to, uint64_t bits);

  uint64_t total_bits(Phase phase) const;
  uint64_t total_bits() const;
  uint64_t pair_bits(int from, int to, Phase phase) const;
  // Bits uploaded by clients (from == kClientParty).
  uint64_t client_bits() const;
  // Inter-server bits only.
  uint64_t server_bits(Phase phase) const;

  uint64_t ot_instances() const { return ot_instances_; }
  void count_ot(uint64_t n = 1) { ot_instances_ += n; }

  static double to_mib(uint64_t bits) {
    return static_cast<double>(bits) / (8.0 * 1024.0 * 1024.0);
  }

  // Transcript in a canonical order (phase, from, to, seq); deterministic
  // runs produce byte-identical dumps.
  std::vector<Entry> transcript() const;
  std::string transcript_jsonl() const;

  void reset();

 private:
  mutable std::mutex mu_;
  std::map<std::pair<int, int>, uint64_t> seq_;
  std::vector<Entry> entries_;
  uint64_t ot_instances_ = 0;
};

}  // namespace scionfl::mpc
