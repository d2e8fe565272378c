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

#include "scionfl/mpc/secagg.h"

#include <mutex>

#include "scionfl/base.h"

namespace scionfl::mpc {
namespace {

using ring::fxp_encode;
using ring::kFracBits;

// Shared-randomness tag layout: inputs below 2^32, protocol-internal masks
// above (Party::next_shared_tag starts at 2^32).
constexpr uint64_t kTagBits = 0;
constexpr uint64_t kTagU = uint64_t(1) << 28;
constexpr uint64_t kTagV = uint64_t(1) << 29;

uint64_t bit_tag(size_t i, size_t m, size_t j) { return kTagBits + i * m + j; }

double decode_scaled(Ring v, int scale_bits) {
  return static_cast<double>(ring::to_signed(v)) /
         static_cast<double>(int64_t(1) << scale_bits);
}

}  // namespace

std::string approach_name(Approach a) {
  switch (a) {
    case Approach::kOne:
      return "1";
    case Approach::kTwo:
      return "2";
    case Approach::kThree:
      return "3";
    case Approach::kGlobal:
      return "global";
  }
  return "1";
}

Approach approach_from_name(const std::string& name) {
  if (name == "1" || name == "I") return Approach::kOne;
  if (name == "2" || name == "II") return Approach::kTwo;
  if (name == "3" || name == "III" || name == "sepagg")
    return Approach::kThree;
  if (name == "global") return Approach::kGlobal;
  SCIONFL_ENFORCE(false, "unknown aggregation approach: ", name);
}

Ring client_share_arith(double value, int q, const SharedRandomness& shared,
                        uint64_t tag, CostLedger& ledger) {
  Ring lambda = 0;
  for (int j = 0; j < q; ++j) lambda += server_lambda_arith(j, shared, tag);
  Ring masked = fxp_encode(value) - lambda;
  ledger.record(Phase::kInput, kClientParty, 0, ring::kRingBits);
  for (int j = 1; j < q; ++j) {
    ledger.record(Phase::kInput, 0, j, ring::kRingBits);
  }
  return masked;
}

uint8_t client_share_bit(uint8_t bit, int q, const SharedRandomness& shared,
                         uint64_t tag, CostLedger& ledger) {
  uint8_t lambda = 0;
  for (int j = 0; j < q; ++j) lambda ^= server_lambda_bit(j, shared, tag);
  uint8_t masked = static_cast<uint8_t>((bit & 1) ^ lambda);
  ledger.record(Phase::kInput, kClientParty, 0, 1);
  for (int j = 1; j < q; ++j) {
    ledger.record(Phase::kInput, 0, j, 1);
  }
  return masked;
}

Ring server_lambda_arith(int server, const SharedRandomness& shared,
                         uint64_t tag) {
  return shared.stream(server, mix_key(tag, 0xa17)).next_u32();
}

uint8_t server_lambda_bit(int server, const SharedRandomness& shared,
                          uint64_t tag) {
  return shared.stream(server, mix_key(tag, 0xb17)).next_bit() ? 1 : 0;
}

SecaggRun run_secagg(Approach approach, bitconv::ConvMode mode,
                     const SecaggInstance& instance, uint64_t seed,
                     Scheduler scheduler, CostModel cost, int q) {
  const size_t n = instance.bits.size();
  SCIONFL_ENFORCE(n >= 1, "aggregation needs at least one client");
  const size_t m = instance.bits[0].size();
  for (const auto& row : instance.bits) {
    SCIONFL_ENFORCE(row.size() == m, "ragged bit matrix");
  }
  const bool global = approach == Approach::kGlobal;
  if (!global) {
    SCIONFL_ENFORCE(instance.s_min.size() == n && instance.s_max.size() == n,
                    "need one scale pair per client");
  }

  Runtime rt(q, seed, cost, scheduler);

  // Client interaction: masked payloads to S1, relayed onward; scale inputs
  // only when scales are private.
  std::vector<std::vector<uint8_t>> masked_bits(n,
                                                std::vector<uint8_t>(m, 0));
  std::vector<Ring> masked_u(n, 0);
  std::vector<Ring> masked_v(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      masked_bits[i][j] = client_share_bit(
          instance.bits[i][j], q, rt.shared(), bit_tag(i, m, j), rt.ledger());
    }
    if (!global) {
      masked_u[i] = client_share_arith(instance.s_min[i], q, rt.shared(),
                                       kTagU + i, rt.ledger());
      masked_v[i] = client_share_arith(instance.s_max[i], q, rt.shared(),
                                       kTagV + i, rt.ledger());
    }
  }

  const int scale_shift = mode == bitconv::ConvMode::kExact ? 0 : kFracBits;
  std::vector<double> result(m, 0.0);
  std::mutex result_mu;

  auto program = [&](Party& ctx) {
    const int me = ctx.id();
    // Rebuild the local input views from the shared randomness.
    std::vector<std::vector<SharedBit>> b(n, std::vector<SharedBit>(m));
    std::vector<Shared> u(n);
    std::vector<Shared> v(n);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < m; ++j) {
        b[i][j] = SharedBit{
            masked_bits[i][j],
            server_lambda_bit(me, ctx.shared(), bit_tag(i, m, j))};
      }
      if (!global) {
        u[i] = Shared{masked_u[i],
                      server_lambda_arith(me, ctx.shared(), kTagU + i)};
        v[i] = Shared{masked_v[i],
                      server_lambda_arith(me, ctx.shared(), kTagV + i)};
      }
    }

    // Preprocessing: one conversion per payload bit.
    std::vector<std::vector<BitaPrep>> preps(n, std::vector<BitaPrep>(m));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < m; ++j) {
        preps[i][j] = pi_bita_pre(ctx, b[i][j].lambda_share, mode, scale_shift);
      }
    }

    // sum_i u_i as an additive share (public masked part to S1).
    auto sum_shares = [&](const std::vector<Shared>& xs) {
      Shared acc{0, 0};
      for (const auto& x : xs) acc = acc + x;
      return acc;
    };

    auto publish = [&](size_t j, double value) {
      if (me == 0) {
        std::lock_guard<std::mutex> lock(result_mu);
        result[j] = value;
      }
    };

    if (global) {
      // Global scales: column bit-sums are output-equivalent, revealed
      // toward S1 which applies the public affine map.
      const double lo = instance.global_min;
      const double hi = instance.global_max;
      for (size_t j = 0; j < m; ++j) {
        Ring acc = 0;
        for (size_t i = 0; i < n; ++i) {
          acc += bita_additive_share(ctx, b[i][j], preps[i][j]);
        }
        Ring t = open_to_designated(ctx, acc, Phase::kOnline);
        publish(j, double(n) * lo +
                       decode_scaled(t, scale_shift) * (hi - lo));
      }
      return;
    }

    Shared sum_u = sum_shares(u);

    if (approach == Approach::kOne) {
      // Convert every bit, then fuse the per-column inner product with the
      // output reveal.
      std::vector<Shared> s(n);
      for (size_t i = 0; i < n; ++i) s[i] = v[i] - u[i];
      std::vector<std::vector<Shared>> bhat(n, std::vector<Shared>(m));
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) {
          bhat[i][j] = pi_bita(ctx, b[i][j], preps[i][j]);
        }
      }
      for (size_t j = 0; j < m; ++j) {
        Ring acc = 0;
        for (size_t i = 0; i < n; ++i) {
          Ring gamma =
              ctx.dealer_mul_share(bhat[i][j].lambda_share, s[i].lambda_share);
          acc += bhat[i][j].masked * s[i].lambda_share +
                 s[i].masked * bhat[i][j].lambda_share + gamma;
          if (me == 0) acc += bhat[i][j].masked * s[i].masked;
        }
        // Align sum(U) to the product scale and reveal the public output.
        Ring y = acc;
        Ring u_term = sum_u.lambda_share;
        Ring u_pub = sum_u.masked;
        if (scale_shift > 0) {
          u_term <<= scale_shift;
          u_pub <<= scale_shift;
        }
        y += u_term;
        if (me == 0) y += u_pub;
        Ring opened = open_to_designated(ctx, y, Phase::kOnline);
        publish(j, decode_scaled(opened, kFracBits + scale_shift));
      }
      return;
    }

    if (approach == Approach::kTwo) {
      // Bit injection per column, output reveal fused into the opening.
      std::vector<Shared> s(n);
      for (size_t i = 0; i < n; ++i) s[i] = v[i] - u[i];
      for (size_t j = 0; j < m; ++j) {
        Ring acc = 0;
        for (size_t i = 0; i < n; ++i) {
          const Ring unit = Ring(1) << scale_shift;
          const Ring mb = Ring(b[i][j].masked & 1) * unit;
          const Ring sign = b[i][j].masked ? Ring(-1) : Ring(1);
          Ring prod = ctx.dealer_mul_share(preps[i][j].big_lambda_share,
                                           s[i].lambda_share);
          acc += mb * s[i].lambda_share +
                 sign * (s[i].masked * preps[i][j].big_lambda_share + prod);
          if (me == 0) acc += mb * s[i].masked;
        }
        Ring y = acc;
        Ring u_term = sum_u.lambda_share;
        Ring u_pub = sum_u.masked;
        if (scale_shift > 0) {
          u_term <<= scale_shift;
          u_pub <<= scale_shift;
        }
        y += u_term;
        if (me == 0) y += u_pub;
        Ring opened = open_to_designated(ctx, y, Phase::kOnline);
        publish(j, decode_scaled(opened, kFracBits + scale_shift));
      }
      return;
    }

    // Approach III (SepAgg): aggregate bits and scales separately, one
    // secure multiplication per coordinate, estimate sum_i b*s by
    // (1/n) * (sum b) * (sum s).
    Shared sum_s{0, 0};
    for (size_t i = 0; i < n; ++i) sum_s = sum_s + (v[i] - u[i]);
    // s_prime = sum_s * enc(1/n), held at scale 2f (exact) or truncated to f
    // (approx) so the product with the f-scaled bit sum stays in range.
    Shared s_prime = sum_s.scaled(fxp_encode(1.0 / double(n)));
    int s_prime_scale = 2 * kFracBits;
    if (mode == bitconv::ConvMode::kApprox) {
      auto [r_share, rt_share] = ctx.dealer_truncation_pair();
      Ring c_share = s_prime.lambda_share - r_share;
      if (me == 0) {
        c_share += s_prime.masked + (Ring(1) << (ring::kRingBits - 2));
      }
      Ring c = open_to_all(ctx, c_share, Phase::kOnline);
      Ring t = static_cast<Ring>(ring::to_signed(c) >> kFracBits);
      Ring pub = t - (Ring(1) << (ring::kRingBits - 2 - kFracBits));
      s_prime = Shared{pub, rt_share};
      s_prime_scale = kFracBits;
    }

    for (size_t j = 0; j < m; ++j) {
      std::vector<SharedBit> col(n);
      std::vector<BitaPrep> colpreps(n);
      for (size_t i = 0; i < n; ++i) {
        col[i] = b[i][j];
        colpreps[i] = preps[i][j];
      }
      Shared t_j = pi_bita_sum(ctx, col, colpreps);
      Ring prod =
          ctx.dealer_mul_share(t_j.lambda_share, s_prime.lambda_share);
      Ring acc = t_j.masked * s_prime.lambda_share +
                 s_prime.masked * t_j.lambda_share + prod;
      if (me == 0) acc += t_j.masked * s_prime.masked;
      const int w_scale = scale_shift + s_prime_scale;
      Ring y = acc;
      Ring u_term = sum_u.lambda_share;
      Ring u_pub = sum_u.masked;
      const int lift = w_scale - kFracBits;
      u_term <<= lift;
      u_pub <<= lift;
      y += u_term;
      if (me == 0) y += u_pub;
      Ring opened = open_to_designated(ctx, y, Phase::kOnline);
      publish(j, decode_scaled(opened, w_scale));
    }
  };

  rt.run_spmd(program);

  SecaggRun out;
  out.sum = std::move(result);
  out.preprocessing_bits = rt.ledger().total_bits(Phase::kPreprocessing);
  out.input_bits = rt.ledger().total_bits(Phase::kInput);
  out.online_bits = rt.ledger().total_bits(Phase::kOnline);
  out.ot_instances = rt.ledger().ot_instances();
  out.transcript_jsonl = rt.ledger().transcript_jsonl();
  return out;
}

}  // namespace scionfl::mpc
