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

#include "scionfl/ring.h"
#include "scionfl/sharing.h"

namespace scionfl::bitconv {

using ring::BooleanShares;
using ring::Ring;

// The arithmetic equivalent of an XOR-shared bit decomposes into a linear sum
// term, the middle block of cross terms, and the full product term:
//   b = term_s + term_m + term_p,
//   term_s = sum_i b_i,
//   term_m = sum_{k=2..q-1} (-2)^(k-1) * (elementary symmetric products of size k),
//   term_p = (-2)^(q-1) * prod_i b_i.
// With k ones among the shares, the size-j products sum to C(k, j), so the
// terms only depend on the population count.
struct TermParts {
  int64_t sum = 0;
  int64_t middle = 0;
  int64_t product = 0;

  int64_t total() const { return sum + middle + product; }
};

TermParts exact_term_parts(const BooleanShares& shares);

// Exact conversion: equals XOR of the shares embedded in the ring.
Ring exact_bit_to_arith(const BooleanShares& shares);

// Approximate conversion replaces the middle term with its expectation
// (q-1) mod 2 - q/2. The result is a half-integer, so the ring form carries
// it at fixed-point scale 2^f; the value form is exact in binary floating
// point. q = 1 has no middle term and falls back to the exact conversion.
double approx_bit_to_arith_value(const BooleanShares& shares);
Ring approx_bit_to_arith_fxp(const BooleanShares& shares);

// Closed-form conditional expectations over uniform sharings of a fixed bit:
//   E[term_s | b] = q/2
//   E[term_m | b] = (q-1) mod 2 - q/2
//   E[term_p | b] = b - (q-1) mod 2
// Values are half-integers and exact as doubles.
struct ExpectedTerms {
  double sum;
  double middle;
  double product_b0;
  double product_b1;

  double product(int b) const { return b ? product_b1 : product_b0; }
};

ExpectedTerms expected_terms(int q);

// Direct-summation check of the two binomial identities
//   sum_p p*C(n,p) = n*2^(n-1)
//   sum_p 2p*C(n,2p) = sum_p (2p+1)*C(n,2p+1) = n*2^(n-2)
// The even/odd split needs n >= 2 (n = 1 gives a non-integer right side).
bool binomial_identity_check(int n);

enum class ConvOp { kBitToArith, kBitInjection };
enum class ConvMode { kExact, kApprox };

// Number of cross terms (products of two or more shares) a secure evaluation
// must compute:
//   bit-to-arith: exact 2^q - q - 1, approx 1
//   bit injection: exact 2^q + q^2 - 2q - 1, approx q^2 - q + 1
uint64_t cross_term_count(int q, ConvOp op, ConvMode mode);

}  // namespace scionfl::bitconv
