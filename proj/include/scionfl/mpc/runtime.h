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

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "scionfl/mpc/cost_model.h"
#include "scionfl/mpc/ledger.h"
#include "scionfl/prng.h"
#include "scionfl/ring.h"

namespace scionfl::mpc {

using ring::Ring;

// One logical thread per party with blocking mailboxes, or the same party
// programs serialized through a turnstile that always runs the lowest-index
// runnable party. Both schedules produce identical transcripts under fixed
// seeds; a test pins that.
enum class Scheduler { kThreaded, kSequential };

class Runtime;

// Per-party execution context. All communication goes through here so that
// every sent bit hits the ledger.
class Party {
 public:
  Party(Runtime* rt, int id);

  int id() const { return id_; }
  int count() const;

  Prng& rng() { return rng_; }
  const SharedRandomness& shared() const;
  // Protocol-scoped shared-randomness tag; parties run the same program, so
  // the counters stay in lockstep without communication.
  uint64_t next_shared_tag() { return shared_tag_++; }

  void send_words(int to, Phase phase, const std::vector<uint64_t>& words,
                  uint64_t bits);
  std::vector<uint64_t> recv_words(int from);

  void send_ring(int to, Phase phase, Ring v);
  Ring recv_ring(int from);
  void send_ring_vec(int to, Phase phase, const std::vector<Ring>& v);
  std::vector<Ring> recv_ring_vec(int from);

  // 1-out-of-2 OT, this party sending (x0, x1) / receiving by choice bit.
  // Charged to the preprocessing ledger at the configured amortized cost.
  void ot_send(int receiver, Ring x0, Ring x1);
  Ring ot_recv(int sender, uint8_t choice);

  // Ideal dealer rendezvous: all parties submit a share, the dealer
  // reconstructs, applies fn to the secret, and returns fresh additive
  // shares of the result. Charged as one mult-triple per call.
  Ring dealer_mul_share(Ring my_x_share, Ring my_y_share);
  // Truncation pair ([r], [r >> f]) with r uniform below 2^(l-1).
  std::pair<Ring, Ring> dealer_truncation_pair();

  CostLedger& ledger();
  const CostModel& cost() const;

 private:
  Runtime* rt_;
  int id_;
  Prng rng_;
  uint64_t shared_tag_ = 0;
};

using Program = std::function<void(Party&)>;

class Runtime {
 public:
  Runtime(int q, uint64_t seed, CostModel cost = {},
          Scheduler scheduler = Scheduler::kThreaded);

  int party_count() const { return q_; }
  const CostModel& cost() const { return cost_; }
  CostLedger& ledger() { return ledger_; }
  const SharedRandomness& shared() const { return shared_; }
  uint64_t seed() const { return seed_; }

  // Runs one program per party to completion.
  void run(const std::vector<Program>& programs);
  // Convenience: same program body for every party.
  void run_spmd(const Program& program);

 private:
  friend class Party;

  struct ChanKey {
    int from;
    int to;
    int kind;  // 0 = data, 1 = ot
    auto operator<=>(const ChanKey&) const = default;
  };

  void push(const ChanKey& key, std::vector<uint64_t> words);
  std::vector<uint64_t> pop(const ChanKey& key, int waiter);

  // Dealer rendezvous state.
  struct DealerCall {
    std::vector<uint64_t> inputs_x;
    std::vector<uint64_t> inputs_y;
    std::vector<bool> submitted;
    std::vector<Ring> outputs;
    bool ready = false;
  };
  Ring dealer_mul(int party, Ring x_share, Ring y_share);
  std::pair<Ring, Ring> dealer_trunc(int party);

  void turnstile_acquire(int party);
  void turnstile_release_finished(int party);
  void pick_next_locked();

  int q_;
  uint64_t seed_;
  CostModel cost_;
  Scheduler scheduler_;
  SharedRandomness shared_;
  CostLedger ledger_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::map<ChanKey, std::deque<std::vector<uint64_t>>> chans_;
  std::map<uint64_t, DealerCall> dealer_calls_;
  uint64_t dealer_seq_submit_ = 0;
  std::vector<uint64_t> dealer_seq_per_party_;
  std::vector<std::pair<Ring, Ring>> trunc_pool_;
  std::vector<uint64_t> trunc_taken_;

  // Turnstile state for the sequential scheduler.
  enum class PState { kReady, kRunning, kWaiting, kDone };
  std::vector<PState> pstate_;
  std::vector<std::function<bool()>> pwait_;
  int active_ = -1;
};

}  // namespace scionfl::mpc
