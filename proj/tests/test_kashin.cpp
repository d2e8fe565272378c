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

#include "scionfl/kashin.h"
#include "scionfl/prng.h"

using namespace scionfl;
using namespace scionfl::quantize;

namespace {

double rel_err(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0;
  double norm = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    norm += b[i] * b[i];
  }
  return norm == 0.0 ? std::sqrt(diff) : std::sqrt(diff / norm);
}

}  // namespace

TEST_CASE("zero maps to zero") {
  std::vector<double> z(512, 0.0);
  auto a = kashin_decompose(z, 5);
  CHECK(a.size() == 1024);
  for (double v : a) CHECK(v == 0.0);
}

TEST_CASE("decompose then reconstruct is exact within 1e-3") {
  Prng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x(1024);
    for (double& v : x) v = rng.next_log_normal();
    auto a = kashin_decompose(x, 1000 + trial);
    CHECK(a.size() == 1536);
    auto back = kashin_reconstruct(a, x.size(), 1000 + trial);
    CHECK(rel_err(back, x) <= 1e-3);
  }
}

TEST_CASE("least-norm preimage inverts the synthesis exactly") {
  Prng rng(22);
  KashinFrame frame(1024, 77);
  std::vector<double> r(1024);
  for (double& v : r) v = rng.next_gaussian();
  auto a = frame.least_norm(r);
  auto back = frame.synthesize(a);
  CHECK(rel_err(back, r) < 1e-12);
}

TEST_CASE("coefficients are flattened against the trivial embedding") {
  Prng rng(23);
  std::vector<double> x(1024);
  for (double& v : x) v = rng.next_log_normal();
  double norm = 0.0;
  double max_x = 0.0;
  for (double v : x) {
    norm += v * v;
    max_x = std::max(max_x, std::abs(v));
  }
  norm = std::sqrt(norm);
  auto a = kashin_decompose(x, 4242);
  double max_a = 0.0;
  for (double v : a) max_a = std::max(max_a, std::abs(v));
  // The spread target is a small multiple of ||x||/sqrt(K); anything close
  // to max|x| would defeat the representation.
  CHECK(max_a < 4.0 * norm / std::sqrt(1536.0));
  CHECK(max_a < 0.5 * max_x);
}

TEST_CASE("synthesis is linear") {
  Prng rng(24);
  KashinFrame frame(512, 9);
  std::vector<double> a(frame.coeff_len());
  std::vector<double> b(frame.coeff_len());
  for (double& v : a) v = rng.next_gaussian();
  for (double& v : b) v = rng.next_gaussian();
  auto sa = frame.synthesize(a);
  auto sb = frame.synthesize(b);
  std::vector<double> ab(a.size());
  for (size_t i = 0; i < a.size(); ++i) ab[i] = 2.0 * a[i] - 3.0 * b[i];
  auto sab = frame.synthesize(ab);
  for (size_t i = 0; i < sa.size(); ++i) {
    CHECK(sab[i] == doctest::Approx(2.0 * sa[i] - 3.0 * sb[i]).epsilon(1e-9));
  }
}
