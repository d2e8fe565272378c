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

#include "scionfl/base.h"

namespace scionfl::ring {

// Z_2^l with l = 32. All arithmetic wraps modulo 2^32 (two's complement for
// signed interpretation). Fixed-point values use f fractional bits.
using Ring = uint32_t;

inline constexpr int kRingBits = 32;
inline constexpr int kFracBits = 16;
inline constexpr double kFxpUnit = 1.0 / 65536.0;

inline int32_t to_signed(Ring v) { return static_cast<int32_t>(v); }

inline Ring mask_width(Ring v, int bits) {
  return bits >= 64 ? v
                    : static_cast<Ring>(v & ((uint64_t(1) << bits) - 1));
}

// Round-to-nearest fixed-point encoding, representable iff |x| < 2^(l-f-1).
inline Ring fxp_encode(double x) {
  constexpr double limit = double(1u << (kRingBits - kFracBits - 1));
  SCIONFL_ENFORCE(x == x, "fxp_encode: NaN input");
  SCIONFL_ENFORCE(x > -limit && x < limit, "fxp_encode: out of range: ", x);
  double scaled = x * 65536.0;
  auto rounded = static_cast<int64_t>(scaled >= 0 ? scaled + 0.5 : scaled - 0.5);
  return static_cast<Ring>(static_cast<uint64_t>(rounded));
}

inline double fxp_decode(Ring v) {
  return static_cast<double>(to_signed(v)) * kFxpUnit;
}

// Floor division by 2^f on the signed interpretation.
inline Ring fxp_truncate(Ring v) {
  return static_cast<Ring>(to_signed(v) >> kFracBits);
}

// Plaintext fixed-point product (both operands at f, result at f).
inline Ring fxp_mul(Ring a, Ring b) {
  int64_t wide = int64_t(to_signed(a)) * int64_t(to_signed(b));
  return static_cast<Ring>(static_cast<uint64_t>(wide >> kFracBits));
}

struct FxpValue {
  Ring raw = 0;

  static FxpValue encode(double x) { return FxpValue{fxp_encode(x)}; }
  double decode() const { return fxp_decode(raw); }
};

}  // namespace scionfl::ring
