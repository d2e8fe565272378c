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

#include "scionfl/mpc/secagg.h"
#include "scionfl/ring.h"

namespace scionfl::testing {

// Plaintext evaluation of the aggregation target on the fixed-point encoded
// inputs: Y_j = sum_i (u_i + b_ij * (v_i - u_i)). Exact in doubles because
// every operand is a small multiple of 2^-16.
inline std::vector<double> plaintext_row_aggregate(
    const mpc::SecaggInstance& inst) {
  const size_t n = inst.bits.size();
  const size_t m = inst.bits[0].size();
  std::vector<double> out(m, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double u = ring::fxp_decode(ring::fxp_encode(inst.s_min[i]));
    const double v = ring::fxp_decode(ring::fxp_encode(inst.s_max[i]));
    for (size_t j = 0; j < m; ++j) {
      out[j] += u + double(inst.bits[i][j]) * (v - u);
    }
  }
  return out;
}

// Plaintext evaluation of the separated-aggregation estimate with the same
// public 1/n encoding the protocol uses:
//   Y_j = sum(u) + (sum_i b_ij) * (sum(v - u) * enc(1/n) / 2^32).
inline std::vector<double> plaintext_sepagg(const mpc::SecaggInstance& inst) {
  const size_t n = inst.bits.size();
  const size_t m = inst.bits[0].size();
  int64_t delta_sum = 0;  // ring value of sum(v - u) at scale f
  double u_sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    int64_t u = int64_t(ring::to_signed(ring::fxp_encode(inst.s_min[i])));
    int64_t v = int64_t(ring::to_signed(ring::fxp_encode(inst.s_max[i])));
    delta_sum += v - u;
    u_sum += double(u) / 65536.0;
  }
  const int64_t inv_n =
      int64_t(ring::to_signed(ring::fxp_encode(1.0 / double(n))));
  const double s_prime = double(delta_sum * inv_n) / 4294967296.0;
  std::vector<double> out(m, 0.0);
  for (size_t j = 0; j < m; ++j) {
    int64_t bits = 0;
    for (size_t i = 0; i < n; ++i) bits += inst.bits[i][j];
    out[j] = u_sum + double(bits) * s_prime;
  }
  return out;
}

// Global-scales target: Y_j = n*lo + (sum_i b_ij) * (hi - lo).
inline std::vector<double> plaintext_global(const mpc::SecaggInstance& inst) {
  const size_t n = inst.bits.size();
  const size_t m = inst.bits[0].size();
  std::vector<double> out(m, 0.0);
  for (size_t j = 0; j < m; ++j) {
    int64_t bits = 0;
    for (size_t i = 0; i < n; ++i) bits += inst.bits[i][j];
    out[j] = double(n) * inst.global_min +
             double(bits) * (inst.global_max - inst.global_min);
  }
  return out;
}

inline mpc::SecaggInstance random_instance(size_t n, size_t m, Prng& rng,
                                           double scale_mag = 0.02) {
  mpc::SecaggInstance inst;
  inst.bits.assign(n, std::vector<uint8_t>(m, 0));
  inst.s_min.resize(n);
  inst.s_max.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double a = (rng.next_unit() - 0.5) * 2.0 * scale_mag;
    double b = (rng.next_unit() - 0.5) * 2.0 * scale_mag;
    inst.s_min[i] = std::min(a, b);
    inst.s_max[i] = std::max(a, b);
    for (size_t j = 0; j < m; ++j) {
      inst.bits[i][j] = rng.next_bit() ? 1 : 0;
    }
  }
  return inst;
}

}  // namespace scionfl::testing
