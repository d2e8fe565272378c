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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scionfl/robust/attack.h"
#include "scionfl/ring.h"
#include "scionfl/robust/defense.h"

using namespace scionfl;
using namespace scionfl::robust;
using quantize::QuantizedVector;
using quantize::Scheme;

namespace {

QuantizedVector make_qv(const std::vector<uint8_t>& bits, double s_min,
                        double s_max) {
  QuantizedVector qv;
  qv.scheme = Scheme::kSQ;
  qv.original_len = bits.size();
  qv.bits = bits;
  qv.chunks = {{0, bits.size(), s_min, s_max}};
  return qv;
}

QuantizedVector quantize_dense(const std::vector<double>& x, Prng& rng) {
  return quantize::sq_quantize(x, rng);
}

double norm_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("aggregate of quantized updates") {
  Prng rng(61);
  std::vector<double> x = {0.5, -0.25, 0.75, 0.0};
  auto qv = quantize_dense(x, rng);
  auto agg = aggregate_quantized({qv});
  auto dec = quantize::dequantize(qv);
  for (size_t i = 0; i < x.size(); ++i) {
    CHECK(agg[i] == doctest::Approx(dec[i]));
  }

  // complementary bits with equal scales average to the midpoint
  auto a = make_qv({1, 0, 1, 0}, -1.0, 1.0);
  auto b = make_qv({0, 1, 0, 1}, -1.0, 1.0);
  for (double v : aggregate_quantized({a, b})) CHECK(v == doctest::Approx(0.0));

  // matches dequantize-then-average on random inputs
  std::vector<QuantizedVector> qvs;
  std::vector<std::vector<double>> decs;
  for (int i = 0; i < 5; ++i) {
    std::vector<double> y(16);
    for (double& v : y) v = rng.next_gaussian();
    qvs.push_back(quantize_dense(y, rng));
    decs.push_back(quantize::dequantize(qvs.back()));
  }
  auto mean = aggregate_quantized(qvs);
  for (size_t j = 0; j < mean.size(); ++j) {
    double want = 0.0;
    for (const auto& d : decs) want += d[j];
    CHECK(mean[j] == doctest::Approx(want / 5.0));
  }
  CHECK_THROWS(aggregate_quantized({}));
}

TEST_CASE("quantized l2 norm from bit counts") {
  CHECK(l2_norm_q(make_qv({0, 0, 0, 0}, 0.0, 5.0)) == doctest::Approx(0.0));
  // beta = 4, one set bit, scales (1, 2): sqrt(3*1 + 1*4) = sqrt(7)
  CHECK(l2_norm_q(make_qv({0, 0, 0, 1}, 1.0, 2.0)) ==
        doctest::Approx(std::sqrt(7.0)));
  Prng rng(62);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(32);
    for (double& v : x) v = rng.next_gaussian();
    auto qv = quantize_dense(x, rng);
    CHECK(l2_norm_q(qv) ==
          doctest::Approx(norm_of(quantize::dequantize(qv))).epsilon(1e-9));
  }
}

TEST_CASE("norm scaling touches only the scales") {
  auto qv = make_qv({1, 0, 1, 1}, 0.5, 2.0);
  const double norm = l2_norm_q(qv);

  auto same = scale_by_norm(qv, 3.0, norm);
  CHECK(same.chunks[0].s_min == qv.chunks[0].s_min);
  CHECK(same.chunks[0].s_max == qv.chunks[0].s_max);

  // above the bound the scaled norm hits it exactly (homogeneity)
  const double avg = norm / 6.0;
  auto scaled = scale_by_norm(qv, 3.0, avg);
  CHECK(scaled.bits == qv.bits);
  CHECK(l2_norm_q(scaled) == doctest::Approx(3.0 * avg).epsilon(1e-12));
  CHECK_THROWS(scale_by_norm(qv, 3.0, 0.0));
}

TEST_CASE("quantized cosine distance") {
  Prng rng(63);
  std::vector<double> x(64);
  for (double& v : x) v = rng.next_gaussian();
  auto qv = quantize_dense(x, rng);
  auto dec = quantize::dequantize(qv);
  CHECK(cosine_distance_q(qv, dec) == doctest::Approx(1.0).epsilon(1e-9));

  auto unit = make_qv({1, 0}, 0.0, 1.0);  // dequantizes to (1, 0)
  std::vector<double> ortho = {0.0, 1.0};
  CHECK(cosine_distance_q(unit, ortho) == doctest::Approx(0.0));
  CHECK_THROWS(cosine_distance_q(make_qv({0, 0}, 0.0, 0.0), ortho));

  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(32);
    std::vector<double> s(32);
    for (double& v : a) v = rng.next_gaussian();
    for (double& v : s) v = rng.next_gaussian();
    auto q = quantize_dense(a, rng);
    auto d = quantize::dequantize(q);
    double dot = 0.0;
    for (size_t i = 0; i < s.size(); ++i) dot += d[i] * s[i];
    double want = dot / (norm_of(d) * norm_of(s));
    CHECK(cosine_distance_q(q, s) == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("cosine ranking survives dropping the reference norm") {
  Prng rng(64);
  std::vector<double> ref(32);
  for (double& v : ref) v = rng.next_gaussian();
  std::vector<QuantizedVector> qvs;
  for (int i = 0; i < 8; ++i) {
    std::vector<double> a(32);
    for (double& v : a) v = rng.next_gaussian();
    qvs.push_back(quantize_dense(a, rng));
  }
  std::vector<size_t> by_cos(qvs.size());
  std::iota(by_cos.begin(), by_cos.end(), 0);
  std::vector<size_t> by_score = by_cos;
  std::stable_sort(by_cos.begin(), by_cos.end(), [&](size_t a, size_t b) {
    return cosine_distance_q(qvs[a], ref) < cosine_distance_q(qvs[b], ref);
  });
  std::stable_sort(by_score.begin(), by_score.end(), [&](size_t a, size_t b) {
    return cosine_score_unnormalized(qvs[a], ref) / l2_norm_q(qvs[a]) <
           cosine_score_unnormalized(qvs[b], ref) / l2_norm_q(qvs[b]);
  });
  CHECK(by_cos == by_score);
}

TEST_CASE("aura excludes the deviating update") {
  Prng rng(65);
  std::vector<QuantizedVector> updates;
  std::vector<double> base(64);
  for (double& v : base) v = rng.next_gaussian();
  for (int i = 0; i < 9; ++i) {
    std::vector<double> x = base;
    for (double& v : x) v += 0.1 * rng.next_gaussian();
    updates.push_back(quantize_dense(x, rng));
  }
  std::vector<double> outlier(64);
  for (size_t j = 0; j < 64; ++j) outlier[j] = -2.0 * base[j];
  updates.push_back(quantize_dense(outlier, rng));

  DefenseConfig cfg;
  cfg.filter_count = 1;
  auto outcome = aura_defend(updates, cfg);
  REQUIRE(outcome.excluded.size() == 1);
  CHECK(outcome.excluded[0] == 9);

  cfg.filter_count = 2;
  CHECK(aura_defend(updates, cfg).excluded.size() == 2);

  std::vector<QuantizedVector> same(4, updates[0]);
  cfg.filter_count = size_t(0);
  auto none = aura_defend(same, cfg);
  CHECK(none.excluded.empty());
  auto dec = quantize::dequantize(updates[0]);
  for (size_t j = 0; j < dec.size(); ++j) {
    CHECK(none.aggregate[j] == doctest::Approx(dec[j]));
  }
  DefenseConfig bad;
  bad.filter_count = 10;
  CHECK_THROWS(aura_defend(updates, bad));
}

TEST_CASE("post-defense norms respect the clipping bound") {
  Prng rng(66);
  std::vector<QuantizedVector> updates;
  std::vector<double> norms;
  for (int i = 0; i < 10; ++i) {
    std::vector<double> x(64);
    double mag = (i == 0) ? 10.0 : 1.0;  // one oversized update
    for (double& v : x) v = mag * rng.next_gaussian();
    updates.push_back(quantize_dense(x, rng));
    norms.push_back(l2_norm_q(updates.back()));
  }
  double avg = std::accumulate(norms.begin(), norms.end(), 0.0) / 10.0;
  for (const auto& qv : updates) {
    auto scaled = scale_by_norm(qv, 1.5, avg);
    CHECK(l2_norm_q(scaled) <= 1.5 * avg * (1.0 + 1.0 / 65536.0));
  }
}

TEST_CASE("ties break toward the lower client index") {
  auto a = make_qv({1, 0}, 0.0, 1.0);
  std::vector<QuantizedVector> updates = {a, a, a};
  DefenseConfig cfg;
  cfg.filter_count = 1;
  auto outcome = aura_defend(updates, cfg);
  REQUIRE(outcome.excluded.size() == 1);
  CHECK(outcome.excluded[0] == 0);
}

TEST_CASE("fraction-based filter count") {
  DefenseConfig cfg;
  CHECK(resolve_filter_count(cfg, 10) == 2);
  CHECK(resolve_filter_count(cfg, 11) == 3);
  cfg.filter_count = 4;
  CHECK(resolve_filter_count(cfg, 10) == 4);
}

TEST_CASE("seeded synthetic scenario filters most attackers") {
  // Well-separated benign cluster plus two reversed attackers, psi = 2: at
  // least half of the attackers go in at least 90 of 100 seeded trials.
  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Prng rng(7000 + trial);
    std::vector<double> base(128);
    for (double& v : base) v = rng.next_gaussian();
    std::vector<QuantizedVector> updates;
    for (int i = 0; i < 8; ++i) {
      std::vector<double> x = base;
      for (double& v : x) v += 0.15 * rng.next_gaussian();
      updates.push_back(quantize_dense(x, rng));
    }
    for (int i = 0; i < 2; ++i) {
      std::vector<double> x(128);
      for (size_t j = 0; j < 128; ++j) {
        x[j] = -base[j] + 0.15 * rng.next_gaussian();
      }
      updates.push_back(quantize_dense(x, rng));
    }
    DefenseConfig cfg;
    cfg.filter_count = 2;
    auto outcome = aura_defend(updates, cfg);
    int attackers_excluded = 0;
    for (size_t idx : outcome.excluded) {
      if (idx >= 8) ++attackers_excluded;
    }
    if (attackers_excluded >= 1) ++good;
  }
  CHECK(good >= 90);
}

TEST_CASE("client norm verification") {
  Prng rng(67);
  std::vector<double> x(64);
  for (double& v : x) v = rng.next_gaussian();
  auto qv = quantize_dense(x, rng);
  double norm = l2_norm_q(qv);
  CHECK(verify_client_norm(norm, 1.0 / norm, qv));
  CHECK_FALSE(verify_client_norm(2.0 * norm, 0.5 / norm, qv));
  CHECK_FALSE(verify_client_norm(norm, 1.2 / norm, qv));
  // one fixed-point rounding step on the claim stays inside the tolerance
  double rounded = scionfl::ring::fxp_decode(scionfl::ring::fxp_encode(norm));
  CHECK(verify_client_norm(rounded, 1.0 / rounded, qv));
  // a 64-ulp shift falls outside it
  CHECK_FALSE(verify_client_norm(norm + 64.0 / 65536.0, 1.0 / norm, qv));
  CHECK_FALSE(verify_client_norm(-1.0, 1.0, qv));
}

TEST_CASE("minmax attack closed forms") {
  std::vector<std::vector<double>> same = {{1.0, 2.0}, {1.0, 2.0}};
  auto r = minmax_attack(same);
  CHECK(r.gamma == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(r.gradient[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.gradient[1] == doctest::Approx(2.0).epsilon(1e-4));

  // 2D instance: benign (1,0), (-1,0) with perturbation (0,-1): bound 2,
  // the mean is at the origin, so gamma solves 1 + gamma^2 = 4.
  AttackConfig cfg;
  cfg.perturbation = Perturbation::kInverseUnit;
  std::vector<std::vector<double>> shifted = {{1.0, 1e-9}, {-1.0, 1e-9}};
  auto res = minmax_attack(shifted, cfg);
  CHECK(res.gamma == doctest::Approx(std::sqrt(3.0)).epsilon(1e-4));

  // a zero perturbation vector is an error
  std::vector<std::vector<double>> zero_mean = {{1.0, 0.0}, {-1.0, 0.0}};
  CHECK_THROWS(minmax_attack(zero_mean, cfg));
  CHECK_THROWS(minmax_attack({{1.0}}));
}

TEST_CASE("minmax satisfies the constraint and matches a grid oracle") {
  Prng rng(68);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::vector<double>> benign;
    for (int i = 0; i < 5; ++i) {
      std::vector<double> g(8);
      for (double& v : g) v = rng.next_gaussian() + 0.5;
      benign.push_back(g);
    }
    AttackConfig cfg;
    cfg.perturbation =
        t % 2 == 0 ? Perturbation::kInverseUnit : Perturbation::kInverseStd;
    auto res = minmax_attack(benign, cfg);

    double bound = 0.0;
    for (size_t i = 0; i < benign.size(); ++i) {
      for (size_t j = i + 1; j < benign.size(); ++j) {
        double d = 0.0;
        for (size_t k = 0; k < 8; ++k) {
          double diff = benign[i][k] - benign[j][k];
          d += diff * diff;
        }
        bound = std::max(bound, std::sqrt(d));
      }
    }
    double worst = 0.0;
    for (const auto& g : benign) {
      double d = 0.0;
      for (size_t k = 0; k < 8; ++k) {
        double diff = res.gradient[k] - g[k];
        d += diff * diff;
      }
      worst = std::max(worst, std::sqrt(d));
    }
    CHECK(worst <= bound + 1e-4);

    auto p = perturbation_vector(benign, cfg.perturbation);
    std::vector<double> mean(8, 0.0);
    for (const auto& g : benign) {
      for (size_t k = 0; k < 8; ++k) mean[k] += g[k] / benign.size();
    }
    double best = 0.0;
    for (double gamma = 0.0; gamma < 50.0; gamma += 5e-4) {
      double w = 0.0;
      for (const auto& g : benign) {
        double d = 0.0;
        for (size_t k = 0; k < 8; ++k) {
          double diff = mean[k] + gamma * p[k] - g[k];
          d += diff * diff;
        }
        w = std::max(w, std::sqrt(d));
      }
      if (w <= bound) {
        best = gamma;
      } else {
        break;
      }
    }
    CHECK(std::abs(res.gamma - best) <= 1e-3);
  }
}
