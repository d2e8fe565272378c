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

#include <doctest.h>

#include <array>
#include <cmath>

#include "scionfl/prng.h"
#include "scionfl/ring.h"
#include "scionfl/sharing.h"

using namespace scionfl;
using namespace scionfl::ring;

TEST_CASE("fixed-point encoding") {
  CHECK(fxp_encode(0.0) == 0u);
  CHECK(fxp_encode(1.0) == 65536u);
  // -0.5 * 2^16 mod 2^32 (two's complement)
  CHECK(fxp_encode(-0.5) == 4294934528u);
  CHECK(fxp_decode(fxp_encode(-0.5)) == doctest::Approx(-0.5));
  CHECK_THROWS(fxp_encode(40000.0));
  CHECK_THROWS(fxp_encode(std::nan("")));
}

TEST_CASE("fixed-point round trip and arithmetic") {
  Prng rng(11);
  for (int i = 0; i < 200; ++i) {
    double x = (rng.next_unit() - 0.5) * 100.0;
    CHECK(std::abs(fxp_decode(fxp_encode(x)) - x) <= 1.0 / 65536.0);
  }
  // Sums are exact when no rounding occurred.
  Ring a = fxp_encode(1.25);
  Ring b = fxp_encode(-2.75);
  CHECK(fxp_decode(a + b) == doctest::Approx(-1.5));
  // Products of representable values within 2 ulp after truncation.
  for (int i = 0; i < 200; ++i) {
    double x = fxp_decode(fxp_encode((rng.next_unit() - 0.5) * 20.0));
    double y = fxp_decode(fxp_encode((rng.next_unit() - 0.5) * 20.0));
    double got = fxp_decode(fxp_mul(fxp_encode(x), fxp_encode(y)));
    CHECK(std::abs(got - x * y) <= 2.0 / 65536.0);
  }
}

TEST_CASE("additive sharing reconstructs") {
  Prng rng(5);
  for (int q : {2, 3, 5, 8}) {
    for (int i = 0; i < 50; ++i) {
      Ring v = rng.next_u32();
      auto s = share_additive(v, q, rng);
      CHECK(reconstruct_additive(s) == v);
    }
  }
  CHECK_THROWS(share_additive(1, 1, rng));
}

TEST_CASE("the last share is forced by the construction") {
  // share_q = v - sum(others): zero randomness means all-zero shares, and
  // the Boolean analogue pins (1, 0) for b = 1 when the random share is 1.
  ring::AdditiveShares z;
  z.shares = {0, 0, 0};
  CHECK(reconstruct_additive(z) == 0u);

  Prng rng(123);
  for (int i = 0; i < 20; ++i) {
    Ring v = rng.next_u32();
    auto s = share_additive(v, 3, rng);
    CHECK(s.shares[2] == Ring(v - s.shares[0] - s.shares[1]));
  }
  for (int i = 0; i < 20; ++i) {
    auto s = share_boolean(1, 2, rng);
    CHECK(s.shares[1] == (1 ^ s.shares[0]));
    if (s.shares[0] == 1) {
      CHECK(s.shares[1] == 0);
    }
  }
}

TEST_CASE("additive share marginals are uniform over a 4-bit ring") {
  // For every (v, randomness) pair with q = 2 each share-1 value shows up
  // exactly 16 times.
  std::array<int, 16> histogram{};
  for (Ring v = 0; v < 16; ++v) {
    for (Ring r = 0; r < 16; ++r) {
      // share 1 = r, share 2 = v - r (mod 16)
      Ring s1 = r;
      Ring s2 = mask_width(v - r, 4);
      CHECK(mask_width(s1 + s2, 4) == v);
      histogram[s1] += 1;
    }
  }
  for (int count : histogram) CHECK(count == 16);
}

TEST_CASE("boolean sharing exhaustive") {
  for (int q = 2; q <= 8; ++q) {
    for (uint32_t assignment = 0; assignment < (1u << (q - 1)); ++assignment) {
      for (uint8_t b = 0; b <= 1; ++b) {
        ring::BooleanShares s;
        uint8_t acc = 0;
        for (int i = 0; i + 1 < q; ++i) {
          uint8_t bit = (assignment >> i) & 1;
          s.shares.push_back(bit);
          acc ^= bit;
        }
        s.shares.push_back(static_cast<uint8_t>(acc ^ b));
        CHECK(reconstruct_boolean(s) == b);
      }
    }
  }
}

TEST_CASE("masked sharing round trips") {
  Prng rng(17);
  for (int i = 0; i < 100; ++i) {
    Ring v = rng.next_u32();
    auto ms = share_masked(v, 3, rng);
    CHECK(reconstruct_masked(ms) == v);
  }
  // Boolean-domain variant, all cases for q = 3.
  for (uint8_t b = 0; b <= 1; ++b) {
    for (int i = 0; i < 32; ++i) {
      Prng r2(1000 + i);
      auto mb = share_masked_bit(b, 3, r2);
      CHECK(reconstruct_masked_bit(mb) == b);
    }
  }
}

TEST_CASE("shared randomness streams are reproducible") {
  SharedRandomness a{42};
  SharedRandomness b{42};
  auto s1 = a.stream(2, 7);
  auto s2 = b.stream(2, 7);
  for (int i = 0; i < 16; ++i) CHECK(s1.next_u64() == s2.next_u64());
  auto s3 = a.stream(3, 7);
  CHECK(a.stream(2, 7).next_u64() != s3.next_u64());
}
