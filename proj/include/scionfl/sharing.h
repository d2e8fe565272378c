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
#include <vector>

#include "scionfl/prng.h"
#include "scionfl/ring.h"

namespace scionfl::ring {

// [v]-sharing: q additive shares summing to the secret modulo 2^l.
struct AdditiveShares {
  std::vector<Ring> shares;

  int count() const { return static_cast<int>(shares.size()); }
};

// Boolean sharing: q bits XORing to the secret bit.
struct BooleanShares {
  std::vector<uint8_t> shares;

  int count() const { return static_cast<int>(shares.size()); }
};

// <v>-sharing: public masked value plus a shared random mask,
// v = masked + lambda (arithmetic) or v = masked ^ lambda (Boolean).
struct MaskedShare {
  Ring masked = 0;
  AdditiveShares lambda;
};

struct MaskedBitShare {
  uint8_t masked = 0;
  BooleanShares lambda;
};

AdditiveShares share_additive(Ring v, int q, Prng& rng);
Ring reconstruct_additive(const AdditiveShares& s);

// Same sharing over a narrow ring Z_2^bits; used by exhaustive small-ring
// checks, production code runs at the full width.
AdditiveShares share_additive_width(Ring v, int q, int bits, Prng& rng);
Ring reconstruct_additive_width(const AdditiveShares& s, int bits);

BooleanShares share_boolean(uint8_t b, int q, Prng& rng);
uint8_t reconstruct_boolean(const BooleanShares& s);

MaskedShare share_masked(Ring v, int q, Prng& mask_rng);
Ring reconstruct_masked(const MaskedShare& s);

MaskedBitShare share_masked_bit(uint8_t b, int q, Prng& mask_rng);
uint8_t reconstruct_masked_bit(const MaskedBitShare& s);

}  // namespace scionfl::ring
