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

#include "scionfl/bitconv.h"

#include "scionfl/base.h"

namespace scionfl::bitconv {
namespace {

int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int64_t pow_neg2(int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= -2;
  return r;
}

int popcount_shares(const BooleanShares& shares) {
  int k = 0;
  for (uint8_t b : shares.shares) k += (b & 1);
  return k;
}

}  // namespace

TermParts exact_term_parts(const BooleanShares& shares) {
  const int q = shares.count();
  SCIONFL_ENFORCE(q >= 1, "bit conversion needs at least one share");
  const int k = popcount_shares(shares);
  TermParts t;
  t.sum = k;
  if (q == 1) return t;  // the single share is the whole expansion
  for (int j = 2; j <= q - 1; ++j) {
    t.middle += pow_neg2(j - 1) * binom(k, j);
  }
  t.product = (k == q) ? pow_neg2(q - 1) : 0;
  return t;
}

Ring exact_bit_to_arith(const BooleanShares& shares) {
  TermParts t = exact_term_parts(shares);
  return static_cast<Ring>(static_cast<uint64_t>(t.total()));
}

double approx_bit_to_arith_value(const BooleanShares& shares) {
  const int q = shares.count();
  SCIONFL_ENFORCE(q >= 1, "bit conversion needs at least one share");
  if (q == 1) return static_cast<double>(shares.shares[0] & 1);
  TermParts t = exact_term_parts(shares);
  double middle_exp = ((q - 1) % 2) - 0.5 * q;
  return static_cast<double>(t.sum) + middle_exp +
         static_cast<double>(t.product);
}

Ring approx_bit_to_arith_fxp(const BooleanShares& shares) {
  // Half-integer value scaled by 2^f, exact in int64.
  auto scaled = static_cast<int64_t>(approx_bit_to_arith_value(shares) * 2.0);
  scaled <<= (ring::kFracBits - 1);
  return static_cast<Ring>(static_cast<uint64_t>(scaled));
}

ExpectedTerms expected_terms(int q) {
  SCIONFL_ENFORCE(q >= 1, "expected_terms needs q >= 1");
  ExpectedTerms e{};
  const double parity = (q - 1) % 2;
  e.sum = 0.5 * q;
  e.middle = parity - 0.5 * q;
  e.product_b0 = 0.0 - parity;
  e.product_b1 = 1.0 - parity;
  return e;
}

bool binomial_identity_check(int n) {
  SCIONFL_ENFORCE(n >= 2 && n <= 30, "identity check defined for 2 <= n <= 30");
  int64_t weighted = 0;
  int64_t even = 0;
  int64_t odd = 0;
  for (int p = 0; p <= n; ++p) {
    int64_t term = p * binom(n, p);
    weighted += term;
    if (p % 2 == 0) {
      even += term;
    } else {
      odd += term;
    }
  }
  const int64_t full = int64_t(n) << (n - 1);
  const int64_t half = int64_t(n) << (n - 2);
  return weighted == full && even == half && odd == half;
}

uint64_t cross_term_count(int q, ConvOp op, ConvMode mode) {
  SCIONFL_ENFORCE(q >= 2 && q < 63, "cross_term_count needs 2 <= q < 63");
  const uint64_t pow2q = uint64_t(1) << q;
  const uint64_t qq = uint64_t(q) * uint64_t(q);
  if (op == ConvOp::kBitToArith) {
    return mode == ConvMode::kExact ? pow2q - q - 1 : 1;
  }
  return mode == ConvMode::kExact ? pow2q + qq - 2 * q - 1 : qq - q + 1;
}

}  // namespace scionfl::bitconv
