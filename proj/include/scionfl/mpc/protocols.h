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
#include <span>
#include <vector>

#include "scionfl/bitconv.h"
#include "scionfl/mpc/runtime.h"

namespace scionfl::mpc {

// Party-local view of a masked sharing <v>: the masked value is known to
// everyone, the mask is additively shared.
struct Shared {
  Ring masked = 0;
  Ring lambda_share = 0;

  // v = masked + lambda; linear ops are local.
  friend Shared operator+(Shared a, Shared b) {
    return {a.masked + b.masked, a.lambda_share + b.lambda_share};
  }
  friend Shared operator-(Shared a, Shared b) {
    return {a.masked - b.masked, a.lambda_share - b.lambda_share};
  }
  Shared scaled(Ring c) const { return {masked * c, lambda_share * c}; }
  // The masked part is replicated at every party, so adding a public
  // constant touches only it.
  Shared plus_public(Ring c) const { return {masked + c, lambda_share}; }
};

struct SharedBit {
  uint8_t masked = 0;
  uint8_t lambda_share = 0;
};

// Preprocessed material for one bit conversion: this party's additive share
// of the arithmetic mask equivalent, plus the fresh output mask r (held as
// <r> with zero masked part, i.e. the additive sharing itself).
struct BitaPrep {
  Ring big_lambda_share = 0;
  Ring r_share = 0;
  // 0 for the exact conversion (integer embedding), kFracBits for the
  // approximate one (half-integer constants need the fixed-point scale).
  int scale_shift = 0;
};

// Additive share of this party's contribution to the public value; S1
// collects everyone's share (the designated party submits its own), then
// relays the reconstruction. Cost: q*l to S1 plus (q-1)*l relays.
Ring open_to_all(Party& ctx, Ring share, Phase phase);

// Output-style reveal toward the designated party only ((q-1)*l bits); the
// reconstructed value is returned at the target, 0 elsewhere.
Ring open_to_designated(Party& ctx, Ring share, Phase phase, int target = 0);

// Preprocessing: turn this party's Boolean share of the mask bit into an
// additive share of its arithmetic equivalent, scaled by 2^scale_shift.
// q = 3 reproduces the five-OT schedule (three OTs in approximate mode);
// generic q builds every required cross product by chaining pairwise OTs.
BitaPrep pi_bita_pre(Party& ctx, uint8_t my_lambda_bit,
                     bitconv::ConvMode mode, int scale_shift);

// Expected preprocessing OT count of pi_bita_pre.
uint64_t bita_pre_ot_count(int q, bitconv::ConvMode mode);

// Online bit-to-arithmetic conversion: <b>^B -> <b_hat> via one opening of
// z - r, with b_hat = M_b + (1 - 2 m_b) * Lambda_b.
Shared pi_bita(Party& ctx, SharedBit b, const BitaPrep& prep);

// Inner product with one online opening regardless of the vector length;
// operands at fixed-point scale f, result truncated back to f via a
// truncation pair (deterministic 1-ulp variant, biased opening).
Shared pi_dotp(Party& ctx, std::span<const Shared> x,
               std::span<const Shared> y);

// Arithmetic share of a Boolean column's sum, one opening total. The result
// carries the preps' scale.
Shared pi_bita_sum(Party& ctx, std::span<const SharedBit> column,
                   std::span<const BitaPrep> preps);

// sum_i M_i * N_i for a Boolean column M and arithmetic column N, one
// opening total. With exact (integer-scale) conversions the result is at the
// operand scale f and needs no truncation; approximate conversions shift the
// result to 2f and the caller divides publicly.
Shared pi_bit_inj(Party& ctx, std::span<const SharedBit> m_bits,
                  std::span<const Shared> n_vals,
                  std::span<const BitaPrep> preps);

// Additive share of b_hat * 2^shift without re-masking (no communication):
// public part goes to the designated party.
Ring bita_additive_share(Party& ctx, SharedBit b, const BitaPrep& prep);

}  // namespace scionfl::mpc
