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

#include "scionfl/sharing.h"

#include "scionfl/base.h"

namespace scionfl::ring {

AdditiveShares share_additive(Ring v, int q, Prng& rng) {
  return share_additive_width(v, q, kRingBits, rng);
}

AdditiveShares share_additive_width(Ring v, int q, int bits, Prng& rng) {
  SCIONFL_ENFORCE(q >= 2, "additive sharing needs q >= 2, got ", q);
  AdditiveShares out;
  out.shares.resize(q);
  Ring sum = 0;
  for (int i = 0; i + 1 < q; ++i) {
    out.shares[i] = mask_width(rng.next_u32(), bits);
    sum += out.shares[i];
  }
  out.shares[q - 1] = mask_width(v - sum, bits);
  return out;
}

Ring reconstruct_additive(const AdditiveShares& s) {
  return reconstruct_additive_width(s, kRingBits);
}

Ring reconstruct_additive_width(const AdditiveShares& s, int bits) {
  Ring sum = 0;
  for (Ring x : s.shares) sum += x;
  return mask_width(sum, bits);
}

BooleanShares share_boolean(uint8_t b, int q, Prng& rng) {
  SCIONFL_ENFORCE(q >= 2, "Boolean sharing needs q >= 2, got ", q);
  BooleanShares out;
  out.shares.resize(q);
  uint8_t acc = 0;
  for (int i = 0; i + 1 < q; ++i) {
    out.shares[i] = rng.next_bit() ? 1 : 0;
    acc ^= out.shares[i];
  }
  out.shares[q - 1] = static_cast<uint8_t>((b & 1) ^ acc);
  return out;
}

uint8_t reconstruct_boolean(const BooleanShares& s) {
  uint8_t acc = 0;
  for (uint8_t x : s.shares) acc ^= x;
  return acc;
}

MaskedShare share_masked(Ring v, int q, Prng& mask_rng) {
  MaskedShare out;
  out.lambda.shares.resize(q);
  Ring lambda = 0;
  for (int i = 0; i < q; ++i) {
    out.lambda.shares[i] = mask_rng.next_u32();
    lambda += out.lambda.shares[i];
  }
  out.masked = v - lambda;
  return out;
}

Ring reconstruct_masked(const MaskedShare& s) {
  return s.masked + reconstruct_additive(s.lambda);
}

MaskedBitShare share_masked_bit(uint8_t b, int q, Prng& mask_rng) {
  MaskedBitShare out;
  out.lambda.shares.resize(q);
  uint8_t lambda = 0;
  for (int i = 0; i < q; ++i) {
    out.lambda.shares[i] = mask_rng.next_bit() ? 1 : 0;
    lambda ^= out.lambda.shares[i];
  }
  out.masked = static_cast<uint8_t>((b & 1) ^ lambda);
  return out;
}

uint8_t reconstruct_masked_bit(const MaskedBitShare& s) {
  return static_cast<uint8_t>(s.masked ^ reconstruct_boolean(s.lambda));
}

}  // namespace scionfl::ring
