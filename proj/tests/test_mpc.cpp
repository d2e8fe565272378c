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

#include <cmath>

#include "scionfl/mpc/protocols.h"
#include "scionfl/mpc/secagg.h"

using namespace scionfl;
using namespace scionfl::mpc;
using scionfl::bitconv::ConvMode;
using scionfl::ring::fxp_encode;
using scionfl::ring::kFracBits;

namespace {

// Runs one SPMD program and gathers a per-party result.
template <typename Fn>
std::vector<Ring> run_collect(Runtime& rt, Fn body) {
  std::vector<Ring> results(rt.party_count(), 0);
  rt.run_spmd([&](Party& ctx) { results[ctx.id()] = body(ctx); });
  return results;
}

double decode_f(Ring v) { return ring::fxp_decode(v); }

}  // namespace

TEST_CASE("bita preprocessing reconstructs the mask bit, all assignments") {
  for (uint32_t assignment = 0; assignment < 8; ++assignment) {
    Runtime rt(3, 100 + assignment);
    auto shares = run_collect(rt, [&](Party& ctx) {
      uint8_t my_bit = (assignment >> ctx.id()) & 1;
      return pi_bita_pre(ctx, my_bit, ConvMode::kExact, 0).big_lambda_share;
    });
    Ring sum = shares[0] + shares[1] + shares[2];
    uint8_t expect = (assignment & 1) ^ ((assignment >> 1) & 1) ^
                     ((assignment >> 2) & 1);
    CHECK(sum == Ring(expect));
    // five OT instances per exact conversion
    CHECK(rt.ledger().ot_instances() == 5);
  }
}

TEST_CASE("approximate preprocessing matches the closed form, 3 OTs") {
  for (uint32_t assignment = 0; assignment < 8; ++assignment) {
    Runtime rt(3, 200 + assignment);
    auto shares = run_collect(rt, [&](Party& ctx) {
      uint8_t my_bit = (assignment >> ctx.id()) & 1;
      return pi_bita_pre(ctx, my_bit, ConvMode::kApprox, kFracBits)
          .big_lambda_share;
    });
    Ring sum = shares[0] + shares[1] + shares[2];
    ring::BooleanShares bs;
    for (int i = 0; i < 3; ++i) {
      bs.shares.push_back((assignment >> i) & 1);
    }
    CHECK(sum == bitconv::approx_bit_to_arith_fxp(bs));
    CHECK(rt.ledger().ot_instances() == 3);
  }
}

TEST_CASE("generic share counts follow the subset chains") {
  CHECK(bita_pre_ot_count(2, ConvMode::kExact) == 1);
  CHECK(bita_pre_ot_count(3, ConvMode::kExact) == 5);
  CHECK(bita_pre_ot_count(3, ConvMode::kApprox) == 3);
  CHECK(bita_pre_ot_count(4, ConvMode::kApprox) == 6);
  // q = 4 exact and correctness over four parties.
  for (uint32_t assignment = 0; assignment < 16; ++assignment) {
    Runtime rt(4, 300 + assignment);
    auto shares = run_collect(rt, [&](Party& ctx) {
      uint8_t my_bit = (assignment >> ctx.id()) & 1;
      return pi_bita_pre(ctx, my_bit, ConvMode::kExact, 0).big_lambda_share;
    });
    Ring sum = 0;
    uint8_t expect = 0;
    for (int i = 0; i < 4; ++i) expect ^= (assignment >> i) & 1;
    for (Ring s : shares) sum += s;
    CHECK(sum == Ring(expect));
    CHECK(rt.ledger().ot_instances() == bita_pre_ot_count(4, ConvMode::kExact));
  }
}

TEST_CASE("online bit conversion opens the correct value") {
  // b = 1 under arbitrary masking; the opened shared value reconstructs 1.
  for (uint8_t b = 0; b <= 1; ++b) {
    Runtime rt(3, 400 + b);
    uint8_t masked =
        client_share_bit(b, 3, rt.shared(), /*tag=*/5, rt.ledger());
    std::vector<Ring> opened(3);
    std::vector<Ring> lambda(3);
    rt.run_spmd([&](Party& ctx) {
      SharedBit bit{masked, server_lambda_bit(ctx.id(), ctx.shared(), 5)};
      auto prep = pi_bita_pre(ctx, bit.lambda_share, ConvMode::kExact, 0);
      Shared out = pi_bita(ctx, bit, prep);
      opened[ctx.id()] = out.masked;
      lambda[ctx.id()] = out.lambda_share;
    });
    CHECK(opened[0] == opened[1]);
    CHECK(opened[0] == opened[2]);
    Ring value = opened[0] + lambda[0] + lambda[1] + lambda[2];
    CHECK(value == Ring(b));
  }
}

TEST_CASE("single-bit online cost is 160 bits at q = 3") {
  Runtime rt(3, 500);
  uint8_t masked = client_share_bit(1, 3, rt.shared(), 7, rt.ledger());
  rt.run_spmd([&](Party& ctx) {
    SharedBit bit{masked, server_lambda_bit(ctx.id(), ctx.shared(), 7)};
    auto prep = pi_bita_pre(ctx, bit.lambda_share, ConvMode::kExact, 0);
    (void)pi_bita(ctx, bit, prep);
  });
  // three sends to S1 plus two relays of one ring element each
  CHECK(rt.ledger().total_bits(Phase::kOnline) == 160);
}

TEST_CASE("inner product against the plaintext oracle") {
  // X = (1,2)/16, Y = (3,4)/16: z = 11/256, one truncation of slack.
  Runtime rt(3, 600);
  std::vector<double> xs = {1.0 / 16, 2.0 / 16};
  std::vector<double> ys = {3.0 / 16, 4.0 / 16};
  std::vector<Ring> mx(2);
  std::vector<Ring> my(2);
  for (int i = 0; i < 2; ++i) {
    mx[i] = client_share_arith(xs[i], 3, rt.shared(), 10 + i, rt.ledger());
    my[i] = client_share_arith(ys[i], 3, rt.shared(), 20 + i, rt.ledger());
  }
  std::vector<Ring> masked(3);
  std::vector<Ring> lambda(3);
  rt.run_spmd([&](Party& ctx) {
    std::vector<Shared> x(2);
    std::vector<Shared> y(2);
    for (int i = 0; i < 2; ++i) {
      x[i] = Shared{mx[i],
                    server_lambda_arith(ctx.id(), ctx.shared(), 10 + i)};
      y[i] = Shared{my[i],
                    server_lambda_arith(ctx.id(), ctx.shared(), 20 + i)};
    }
    Shared z = pi_dotp(ctx, x, y);
    masked[ctx.id()] = z.masked;
    lambda[ctx.id()] = z.lambda_share;
  });
  Ring value = masked[0] + lambda[0] + lambda[1] + lambda[2];
  double expect = 11.0 / 256.0;
  CHECK(std::abs(decode_f(value) - expect) <= 3.0 / 65536.0);

  // X = Y = 0 -> exactly zero within one truncation ulp.
  Runtime rt0(3, 601);
  std::vector<Ring> m0(3);
  std::vector<Ring> l0(3);
  Ring zm = client_share_arith(0.0, 3, rt0.shared(), 1, rt0.ledger());
  rt0.run_spmd([&](Party& ctx) {
    std::vector<Shared> x = {
        Shared{zm, server_lambda_arith(ctx.id(), ctx.shared(), 1)}};
    Shared z = pi_dotp(ctx, x, x);
    m0[ctx.id()] = z.masked;
    l0[ctx.id()] = z.lambda_share;
  });
  Ring v0 = m0[0] + l0[0] + l0[1] + l0[2];
  CHECK(std::abs(decode_f(v0)) <= 1.0 / 65536.0);
}

TEST_CASE("inner product online cost is independent of the length") {
  auto online_bits = [](size_t len) {
    Runtime rt(3, 700);
    std::vector<Ring> mx(len);
    for (size_t i = 0; i < len; ++i) {
      mx[i] = client_share_arith(0.001 * double(i % 7), 3, rt.shared(),
                                 100 + i, rt.ledger());
    }
    rt.run_spmd([&](Party& ctx) {
      std::vector<Shared> x(len);
      for (size_t i = 0; i < len; ++i) {
        x[i] = Shared{mx[i],
                      server_lambda_arith(ctx.id(), ctx.shared(), 100 + i)};
      }
      (void)pi_dotp(ctx, x, x);
    });
    return rt.ledger().total_bits(Phase::kOnline);
  };
  CHECK(online_bits(10) == online_bits(1000));
}

TEST_CASE("boolean column sum") {
  // column (1,1,0,1) -> 3, one opening total
  const std::vector<uint8_t> column = {1, 1, 0, 1};
  Runtime rt(3, 800);
  std::vector<uint8_t> masked(column.size());
  for (size_t i = 0; i < column.size(); ++i) {
    masked[i] = client_share_bit(column[i], 3, rt.shared(), 50 + i,
                                 rt.ledger());
  }
  std::vector<Ring> zm(3);
  std::vector<Ring> zl(3);
  rt.run_spmd([&](Party& ctx) {
    std::vector<SharedBit> bits(column.size());
    std::vector<BitaPrep> preps(column.size());
    for (size_t i = 0; i < column.size(); ++i) {
      bits[i] = SharedBit{masked[i],
                          server_lambda_bit(ctx.id(), ctx.shared(), 50 + i)};
      preps[i] = pi_bita_pre(ctx, bits[i].lambda_share, ConvMode::kExact, 0);
    }
    Shared z = pi_bita_sum(ctx, bits, preps);
    zm[ctx.id()] = z.masked;
    zl[ctx.id()] = z.lambda_share;
  });
  CHECK(Ring(zm[0] + zl[0] + zl[1] + zl[2]) == 3u);
  // exactly one online opening: 160 bits
  CHECK(rt.ledger().total_bits(Phase::kOnline) == 160);

  // all-zero column sums to zero
  Runtime rt0(3, 801);
  std::vector<uint8_t> zmask(4);
  for (size_t i = 0; i < 4; ++i) {
    zmask[i] = client_share_bit(0, 3, rt0.shared(), 60 + i, rt0.ledger());
  }
  std::vector<Ring> res(3);
  std::vector<Ring> resl(3);
  rt0.run_spmd([&](Party& ctx) {
    std::vector<SharedBit> bits(4);
    std::vector<BitaPrep> preps(4);
    for (size_t i = 0; i < 4; ++i) {
      bits[i] = SharedBit{zmask[i],
                          server_lambda_bit(ctx.id(), ctx.shared(), 60 + i)};
      preps[i] = pi_bita_pre(ctx, bits[i].lambda_share, ConvMode::kExact, 0);
    }
    Shared z = pi_bita_sum(ctx, bits, preps);
    res[ctx.id()] = z.masked;
    resl[ctx.id()] = z.lambda_share;
  });
  CHECK(Ring(res[0] + resl[0] + resl[1] + resl[2]) == 0u);
}

TEST_CASE("bit injection computes the masked inner product") {
  // M = (1,0,1), N = (2,5,7): sum = 9
  const std::vector<uint8_t> m_bits = {1, 0, 1};
  const std::vector<double> n_vals = {2.0, 5.0, 7.0};
  Runtime rt(3, 900);
  std::vector<uint8_t> mb(3);
  std::vector<Ring> mn(3);
  for (size_t i = 0; i < 3; ++i) {
    mb[i] = client_share_bit(m_bits[i], 3, rt.shared(), 70 + i, rt.ledger());
    mn[i] =
        client_share_arith(n_vals[i], 3, rt.shared(), 80 + i, rt.ledger());
  }
  std::vector<Ring> zm(3);
  std::vector<Ring> zl(3);
  rt.run_spmd([&](Party& ctx) {
    std::vector<SharedBit> bits(3);
    std::vector<Shared> vals(3);
    std::vector<BitaPrep> preps(3);
    for (size_t i = 0; i < 3; ++i) {
      bits[i] = SharedBit{mb[i],
                          server_lambda_bit(ctx.id(), ctx.shared(), 70 + i)};
      vals[i] = Shared{mn[i],
                       server_lambda_arith(ctx.id(), ctx.shared(), 80 + i)};
      preps[i] = pi_bita_pre(ctx, bits[i].lambda_share, ConvMode::kExact, 0);
    }
    Shared z = pi_bit_inj(ctx, bits, vals, preps);
    zm[ctx.id()] = z.masked;
    zl[ctx.id()] = z.lambda_share;
  });
  Ring value = zm[0] + zl[0] + zl[1] + zl[2];
  CHECK(std::abs(decode_f(value) - 9.0) <= 3.0 / 65536.0);
  // one opening regardless of the length
  CHECK(rt.ledger().total_bits(Phase::kOnline) == 160);

  // M all zero -> 0
  Runtime rt0(3, 901);
  std::vector<uint8_t> mb0(3);
  std::vector<Ring> mn0(3);
  for (size_t i = 0; i < 3; ++i) {
    mb0[i] = client_share_bit(0, 3, rt0.shared(), 70 + i, rt0.ledger());
    mn0[i] =
        client_share_arith(n_vals[i], 3, rt0.shared(), 80 + i, rt0.ledger());
  }
  std::vector<Ring> z0(3);
  std::vector<Ring> z0l(3);
  rt0.run_spmd([&](Party& ctx) {
    std::vector<SharedBit> bits(3);
    std::vector<Shared> vals(3);
    std::vector<BitaPrep> preps(3);
    for (size_t i = 0; i < 3; ++i) {
      bits[i] = SharedBit{mb0[i],
                          server_lambda_bit(ctx.id(), ctx.shared(), 70 + i)};
      vals[i] = Shared{mn0[i],
                       server_lambda_arith(ctx.id(), ctx.shared(), 80 + i)};
      preps[i] = pi_bita_pre(ctx, bits[i].lambda_share, ConvMode::kExact, 0);
    }
    Shared z = pi_bit_inj(ctx, bits, vals, preps);
    z0[ctx.id()] = z.masked;
    z0l[ctx.id()] = z.lambda_share;
  });
  CHECK(std::abs(decode_f(Ring(z0[0] + z0l[0] + z0l[1] + z0l[2]))) <=
        1.0 / 65536.0);
}

TEST_CASE("client input round trip and upload costs") {
  Runtime rt(3, 1000);
  Prng rng(31);
  for (int i = 0; i < 100; ++i) {
    double v = (rng.next_unit() - 0.5) * 100.0;
    uint64_t tag = 4000 + i;
    Ring masked = client_share_arith(v, 3, rt.shared(), tag, rt.ledger());
    Ring sum = masked;
    for (int j = 0; j < 3; ++j) {
      sum += server_lambda_arith(j, rt.shared(), tag);
    }
    CHECK(sum == fxp_encode(v));
  }
  // one quantized coordinate costs one client bit; a scale costs 32
  CostLedger fresh;
  client_share_bit(1, 3, rt.shared(), 1, fresh);
  CHECK(fresh.client_bits() == 1);
  CHECK(fresh.total_bits(Phase::kInput) == 1 + 2);  // upload + two relays
  client_share_arith(0.5, 3, rt.shared(), 2, fresh);
  CHECK(fresh.client_bits() == 1 + 32);
}

TEST_CASE("schedulers produce identical transcripts") {
  SecaggInstance inst;
  inst.bits = {{1, 0, 1}, {0, 1, 1}};
  inst.s_min = {-0.01, 0.005};
  inst.s_max = {0.02, 0.03};
  auto a = run_secagg(Approach::kTwo, ConvMode::kExact, inst, 77,
                      Scheduler::kThreaded);
  auto b = run_secagg(Approach::kTwo, ConvMode::kExact, inst, 77,
                      Scheduler::kSequential);
  auto c = run_secagg(Approach::kTwo, ConvMode::kExact, inst, 77,
                      Scheduler::kThreaded);
  CHECK(a.transcript_jsonl == b.transcript_jsonl);
  CHECK(a.transcript_jsonl == c.transcript_jsonl);
  CHECK(!a.transcript_jsonl.empty());
  for (size_t j = 0; j < a.sum.size(); ++j) {
    CHECK(a.sum[j] == doctest::Approx(b.sum[j]).epsilon(1e-12));
  }
}
