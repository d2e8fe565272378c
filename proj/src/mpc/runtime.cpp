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

#include "scionfl/mpc/runtime.h"

#include <exception>
#include <thread>

#include "scionfl/base.h"
#include "scionfl/sharing.h"

namespace scionfl::mpc {

namespace {
constexpr int kDealerParty = -2;
}

Party::Party(Runtime* rt, int id)
    : rt_(rt), id_(id), rng_(mix_key(rt->seed(), 0x50a0 + id)) {}

int Party::count() const { return rt_->party_count(); }

const SharedRandomness& Party::shared() const { return rt_->shared(); }

CostLedger& Party::ledger() { return rt_->ledger(); }

const CostModel& Party::cost() const { return rt_->cost(); }

void Party::send_words(int to, Phase phase, const std::vector<uint64_t>& words,
                       uint64_t bits) {
  rt_->ledger().record(phase, id_, to, bits);
  rt_->push({id_, to, 0}, words);
}

std::vector<uint64_t> Party::recv_words(int from) {
  return rt_->pop({from, id_, 0}, id_);
}

void Party::send_ring(int to, Phase phase, Ring v) {
  send_words(to, phase, {v}, rt_->cost().ring_bits);
}

Ring Party::recv_ring(int from) {
  auto words = recv_words(from);
  SCIONFL_ENFORCE(words.size() == 1, "expected a single ring element");
  return static_cast<Ring>(words[0]);
}

void Party::send_ring_vec(int to, Phase phase, const std::vector<Ring>& v) {
  std::vector<uint64_t> words(v.begin(), v.end());
  send_words(to, phase, words, rt_->cost().ring_bits * v.size());
}

std::vector<Ring> Party::recv_ring_vec(int from) {
  auto words = recv_words(from);
  return std::vector<Ring>(words.begin(), words.end());
}

void Party::ot_send(int receiver, Ring x0, Ring x1) {
  rt_->push({id_, receiver, 1}, {x0, x1});
}

Ring Party::ot_recv(int sender, uint8_t choice) {
  auto words = rt_->pop({sender, id_, 1}, id_);
  SCIONFL_ENFORCE(words.size() == 2, "malformed OT payload");
  rt_->ledger().record(Phase::kPreprocessing, sender, id_,
                       rt_->cost().ot_bits);
  rt_->ledger().count_ot();
  return static_cast<Ring>(choice ? words[1] : words[0]);
}

Ring Party::dealer_mul_share(Ring my_x_share, Ring my_y_share) {
  return rt_->dealer_mul(id_, my_x_share, my_y_share);
}

std::pair<Ring, Ring> Party::dealer_truncation_pair() {
  return rt_->dealer_trunc(id_);
}

Runtime::Runtime(int q, uint64_t seed, CostModel cost, Scheduler scheduler)
    : q_(q),
      seed_(seed),
      cost_(cost),
      scheduler_(scheduler),
      shared_{mix_key(seed, 0x5221)},
      dealer_seq_per_party_(q, 0),
      trunc_taken_(q, 0),
      pstate_(q, PState::kReady),
      pwait_(q) {
  SCIONFL_ENFORCE(q >= 2, "runtime needs at least two parties");
}

void Runtime::push(const ChanKey& key, std::vector<uint64_t> words) {
  std::lock_guard<std::mutex> lock(mu_);
  chans_[key].push_back(std::move(words));
  cv_.notify_all();
}

std::vector<uint64_t> Runtime::pop(const ChanKey& key, int waiter) {
  std::unique_lock<std::mutex> lock(mu_);
  if (scheduler_ == Scheduler::kSequential) {
    if (chans_[key].empty()) {
      pstate_[waiter] = PState::kWaiting;
      pwait_[waiter] = [this, key] {
        auto it = chans_.find(key);
        return it != chans_.end() && !it->second.empty();
      };
      active_ = -1;
      pick_next_locked();
      cv_.notify_all();
      cv_.wait(lock, [this, waiter] { return active_ == waiter; });
      pstate_[waiter] = PState::kRunning;
    }
  } else {
    cv_.wait(lock, [this, &key] {
      auto it = chans_.find(key);
      return it != chans_.end() && !it->second.empty();
    });
  }
  auto& q = chans_[key];
  SCIONFL_ENFORCE(!q.empty(), "channel empty after wakeup");
  auto words = std::move(q.front());
  q.pop_front();
  return words;
}

Ring Runtime::dealer_mul(int party, Ring x_share, Ring y_share) {
  uint64_t call_id;
  {
    std::unique_lock<std::mutex> lock(mu_);
    call_id = dealer_seq_per_party_[party]++;
    auto& call = dealer_calls_[call_id];
    if (call.submitted.empty()) {
      call.inputs_x.assign(q_, 0);
      call.inputs_y.assign(q_, 0);
      call.submitted.assign(q_, false);
    }
    call.inputs_x[party] = x_share;
    call.inputs_y[party] = y_share;
    call.submitted[party] = true;
    bool all = true;
    for (bool s : call.submitted) all = all && s;
    if (all) {
      Ring x = 0;
      Ring y = 0;
      for (int i = 0; i < q_; ++i) {
        x += static_cast<Ring>(call.inputs_x[i]);
        y += static_cast<Ring>(call.inputs_y[i]);
      }
      Ring z = x * y;
      // Share randomness derived per call id so completion order does not
      // matter for reproducibility.
      Prng rng(mix_key(mix_key(seed_, 0xdea2), call_id));
      call.outputs.resize(q_);
      Ring sum = 0;
      for (int i = 0; i + 1 < q_; ++i) {
        call.outputs[i] = rng.next_u32();
        sum += call.outputs[i];
      }
      call.outputs[q_ - 1] = z - sum;
      call.ready = true;
      ledger_.record(Phase::kPreprocessing, kDealerParty, 0,
                     cost_.mult_triple_bits);
      cv_.notify_all();
    }
  }
  std::unique_lock<std::mutex> lock(mu_);
  auto ready = [this, call_id] {
    auto it = dealer_calls_.find(call_id);
    return it != dealer_calls_.end() && it->second.ready;
  };
  if (scheduler_ == Scheduler::kSequential) {
    if (!ready()) {
      pstate_[party] = PState::kWaiting;
      pwait_[party] = ready;
      active_ = -1;
      pick_next_locked();
      cv_.notify_all();
      cv_.wait(lock, [this, party] { return active_ == party; });
      pstate_[party] = PState::kRunning;
    }
  } else {
    cv_.wait(lock, ready);
  }
  return dealer_calls_[call_id].outputs[party];
}

std::pair<Ring, Ring> Runtime::dealer_trunc(int party) {
  std::lock_guard<std::mutex> lock(mu_);
  uint64_t idx = trunc_taken_[party]++;
  // r uniform below 2^(l-1); r >> f is its logical shift. Shares of both are
  // derived from the pair index, identically on every party.
  Prng value_rng(mix_key(mix_key(seed_, 0xdea3), idx));
  Ring r = value_rng.next_u32() >> 1;
  Ring rt = r >> ring::kFracBits;
  Prng share_rng(mix_key(mix_key(seed_, 0xdea4), idx));
  Ring sum_r = 0;
  Ring sum_rt = 0;
  Ring share_r = 0;
  Ring share_rt = 0;
  for (int i = 0; i < q_; ++i) {
    Ring sr;
    Ring st;
    if (i + 1 < q_) {
      sr = share_rng.next_u32();
      st = share_rng.next_u32();
      sum_r += sr;
      sum_rt += st;
    } else {
      sr = r - sum_r;
      st = rt - sum_rt;
    }
    if (i == party) {
      share_r = sr;
      share_rt = st;
    }
  }
  return {share_r, share_rt};
}

void Runtime::turnstile_acquire(int party) {
  std::unique_lock<std::mutex> lock(mu_);
  if (scheduler_ != Scheduler::kSequential) return;
  if (active_ == -1) pick_next_locked();
  cv_.wait(lock, [this, party] { return active_ == party; });
  pstate_[party] = PState::kRunning;
}

void Runtime::turnstile_release_finished(int party) {
  std::unique_lock<std::mutex> lock(mu_);
  pstate_[party] = PState::kDone;
  if (scheduler_ == Scheduler::kSequential && active_ == party) {
    active_ = -1;
    pick_next_locked();
  }
  cv_.notify_all();
}

void Runtime::pick_next_locked() {
  if (active_ >= 0) return;
  bool all_done = true;
  for (int i = 0; i < q_; ++i) {
    switch (pstate_[i]) {
      case PState::kReady:
        active_ = i;
        return;
      case PState::kWaiting:
        all_done = false;
        if (pwait_[i] && pwait_[i]()) {
          active_ = i;
          return;
        }
        break;
      case PState::kDone:
        break;
      case PState::kRunning:
        all_done = false;
        break;
    }
  }
  if (!all_done) {
    SCIONFL_ENFORCE(false, "sequential scheduler deadlock");
  }
}

void Runtime::run(const std::vector<Program>& programs) {
  SCIONFL_ENFORCE(static_cast<int>(programs.size()) == q_,
                  "need one program per party");
  pstate_.assign(q_, PState::kReady);
  pwait_.assign(q_, nullptr);
  active_ = -1;

  std::vector<std::exception_ptr> errors(q_);
  std::vector<std::thread> threads;
  threads.reserve(q_);
  for (int i = 0; i < q_; ++i) {
    threads.emplace_back([this, i, &programs, &errors] {
      Party party(this, i);
      try {
        if (scheduler_ == Scheduler::kSequential) turnstile_acquire(i);
        programs[i](party);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      turnstile_release_finished(i);
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void Runtime::run_spmd(const Program& program) {
  std::vector<Program> programs(q_, program);
  run(programs);
}

}  // namespace scionfl::mpc
