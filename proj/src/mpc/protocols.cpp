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

#include "scionfl/mpc/protocols.h"

#include <bit>
#include <map>

#include "scionfl/base.h"

namespace scionfl::mpc {
namespace {

using ring::kFracBits;

Ring pow_neg2_ring(int e) {
  Ring r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<Ring>(-2);
  return r;
}

Ring sign_factor(uint8_t masked_bit) {
  return masked_bit ? static_cast<Ring>(-1) : static_cast<Ring>(1);
}

// Subset list for the cross products of pi_bita_pre, ordered by size then
// lexicographically. Exact mode needs every subset of size >= 2; the
// approximate mode only the prefix chain toward the full product.
std::vector<uint32_t> product_subsets(int q, bitconv::ConvMode mode) {
  std::vector<uint32_t> out;
  if (mode == bitconv::ConvMode::kApprox) {
    uint32_t mask = 1;
    for (int j = 1; j < q; ++j) {
      mask |= (1u << j);
      out.push_back(mask);
    }
    return out;
  }
  for (int size = 2; size <= q; ++size) {
    for (uint32_t mask = 0; mask < (1u << q); ++mask) {
      if (std::popcount(mask) == size) out.push_back(mask);
    }
  }
  return out;
}

}  // namespace

Ring open_to_all(Party& ctx, Ring share, Phase phase) {
  const int q = ctx.count();
  // Everyone (including the designated server) submits its share to S1,
  // which reconstructs and relays.
  ctx.send_ring(0, phase, share);
  Ring value = 0;
  if (ctx.id() == 0) {
    for (int j = 0; j < q; ++j) value += ctx.recv_ring(j);
    for (int j = 1; j < q; ++j) ctx.send_ring(j, phase, value);
  } else {
    value = ctx.recv_ring(0);
  }
  return value;
}

Ring open_to_designated(Party& ctx, Ring share, Phase phase, int target) {
  const int q = ctx.count();
  if (ctx.id() == target) {
    Ring value = share;
    for (int j = 0; j < q; ++j) {
      if (j == target) continue;
      value += ctx.recv_ring(j);
    }
    return value;
  }
  ctx.send_ring(target, phase, share);
  return 0;
}

uint64_t bita_pre_ot_count(int q, bitconv::ConvMode mode) {
  SCIONFL_ENFORCE(q >= 2, "conversion needs q >= 2 shares");
  if (mode == bitconv::ConvMode::kApprox) {
    return uint64_t(q) * (q - 1) / 2;
  }
  uint64_t total = 0;
  for (const auto mask : product_subsets(q, mode)) {
    total += std::popcount(mask) - 1;
  }
  return total;
}

BitaPrep pi_bita_pre(Party& ctx, uint8_t my_lambda_bit,
                     bitconv::ConvMode mode, int scale_shift) {
  const int q = ctx.count();
  const int me = ctx.id();
  SCIONFL_ENFORCE(q <= 16, "pi_bita_pre supports up to 16 parties");
  SCIONFL_ENFORCE(mode == bitconv::ConvMode::kExact || scale_shift >= 1,
                  "approximate conversion needs a fixed-point scale");
  const Ring unit = Ring(1) << scale_shift;
  const uint8_t beta = my_lambda_bit & 1;

  // Additive shares of the scaled cross products, built by chaining pairwise
  // OTs: product(S) = product(S \ {top}) * b_top, one OT per holder of the
  // parent product.
  std::map<uint32_t, Ring> my_product;
  for (uint32_t mask : product_subsets(q, mode)) {
    const int top = 31 - std::countl_zero(mask);
    const uint32_t parent = mask ^ (1u << top);
    Ring acc = 0;
    if (std::popcount(parent) == 1) {
      const int h = std::countr_zero(parent);
      if (me == h) {
        Ring r = ctx.rng().next_u32();
        ctx.ot_send(top, r, r + beta * unit);
        acc -= r;
      }
      if (me == top) acc += ctx.ot_recv(h, beta);
    } else {
      for (int h = 0; h < q; ++h) {
        if (!(parent & (1u << h))) continue;
        if (me == h) {
          Ring r = ctx.rng().next_u32();
          ctx.ot_send(top, r, r + my_product[parent]);
          acc -= r;
        }
        if (me == top) acc += ctx.ot_recv(h, beta);
      }
    }
    if (mask & (1u << me)) my_product[mask] = acc;
  }

  BitaPrep prep;
  prep.scale_shift = scale_shift;
  Ring share = Ring(beta) * unit;
  if (mode == bitconv::ConvMode::kExact) {
    for (const auto& [mask, val] : my_product) {
      share += pow_neg2_ring(std::popcount(mask) - 1) * val;
    }
  } else {
    if (me == 0) {
      // E[middle term] = (q-1) mod 2 - q/2, folded in at the scaled unit.
      int64_t mid = int64_t((q - 1) % 2) * int64_t(unit) -
                    int64_t(q) * (int64_t(unit) >> 1);
      share += static_cast<Ring>(static_cast<uint64_t>(mid));
    }
    uint32_t full = (1u << q) - 1;
    auto it = my_product.find(full);
    if (it != my_product.end()) {
      share += pow_neg2_ring(q - 1) * it->second;
    }
  }
  prep.big_lambda_share = share;

  const uint64_t tag = ctx.next_shared_tag();
  prep.r_share = ctx.shared().stream(ctx.id(), tag).next_u32();
  return prep;
}

Ring bita_additive_share(Party& ctx, SharedBit b, const BitaPrep& prep) {
  const Ring unit = Ring(1) << prep.scale_shift;
  Ring share = sign_factor(b.masked) * prep.big_lambda_share;
  if (ctx.id() == 0) share += Ring(b.masked & 1) * unit;
  return share;
}

Shared pi_bita(Party& ctx, SharedBit b, const BitaPrep& prep) {
  Ring zmr = bita_additive_share(ctx, b, prep) - prep.r_share;
  Ring opened = open_to_all(ctx, zmr, Phase::kOnline);
  return Shared{opened, prep.r_share};
}

Shared pi_dotp(Party& ctx, std::span<const Shared> x,
               std::span<const Shared> y) {
  SCIONFL_ENFORCE(x.size() == y.size(), "pi_dotp length mismatch");
  const bool designated = ctx.id() == 0;
  // Preprocessing: mask products and a truncation pair.
  Ring acc = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    Ring gamma = ctx.dealer_mul_share(x[i].lambda_share, y[i].lambda_share);
    acc += x[i].masked * y[i].lambda_share + y[i].masked * x[i].lambda_share +
           gamma;
    if (designated) acc += x[i].masked * y[i].masked;
  }
  auto [r_share, rt_share] = ctx.dealer_truncation_pair();
  // Biased opening keeps the truncation deterministic within one ulp as long
  // as |sum| stays below 2^(l-2) at scale 2f.
  Ring c_share = acc - r_share;
  if (designated) c_share += Ring(1) << (ring::kRingBits - 2);
  Ring c = open_to_all(ctx, c_share, Phase::kOnline);
  Ring t = static_cast<Ring>(ring::to_signed(c) >> kFracBits);
  Ring pub = t - (Ring(1) << (ring::kRingBits - 2 - kFracBits));
  return Shared{pub, rt_share};
}

Shared pi_bita_sum(Party& ctx, std::span<const SharedBit> column,
                   std::span<const BitaPrep> preps) {
  SCIONFL_ENFORCE(column.size() == preps.size(), "pi_bita_sum size mismatch");
  Ring acc = 0;
  for (size_t i = 0; i < column.size(); ++i) {
    acc += bita_additive_share(ctx, column[i], preps[i]);
  }
  const uint64_t tag = ctx.next_shared_tag();
  Ring r_share = ctx.shared().stream(ctx.id(), tag).next_u32();
  Ring opened = open_to_all(ctx, acc - r_share, Phase::kOnline);
  return Shared{opened, r_share};
}

Shared pi_bit_inj(Party& ctx, std::span<const SharedBit> m_bits,
                  std::span<const Shared> n_vals,
                  std::span<const BitaPrep> preps) {
  SCIONFL_ENFORCE(m_bits.size() == n_vals.size() &&
                      m_bits.size() == preps.size(),
                  "pi_bit_inj size mismatch");
  const bool designated = ctx.id() == 0;
  Ring acc = 0;
  for (size_t i = 0; i < m_bits.size(); ++i) {
    const Ring unit = Ring(1) << preps[i].scale_shift;
    const Ring mb = Ring(m_bits[i].masked & 1) * unit;
    const Ring sign = sign_factor(m_bits[i].masked);
    // Lambda_b * lambda_n products come from the dealer.
    Ring prod =
        ctx.dealer_mul_share(preps[i].big_lambda_share, n_vals[i].lambda_share);
    acc += mb * n_vals[i].lambda_share +
           sign * (n_vals[i].masked * preps[i].big_lambda_share + prod);
    if (designated) acc += mb * n_vals[i].masked;
  }
  const uint64_t tag = ctx.next_shared_tag();
  Ring r_share = ctx.shared().stream(ctx.id(), tag).next_u32();
  Ring opened = open_to_all(ctx, acc - r_share, Phase::kOnline);
  return Shared{opened, r_share};
}

}  // namespace scionfl::mpc
