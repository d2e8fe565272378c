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

#include "scionfl/kashin.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "scionfl/base.h"
#include "scionfl/chunking.h"
#include "scionfl/hadamard.h"
#include "scionfl/prng.h"

namespace scionfl::quantize {
namespace {

std::vector<double> rademacher(size_t n, uint64_t key) {
  Prng rng(key);
  std::vector<double> d(n);
  for (double& v : d) v = rng.next_bit() ? -1.0 : 1.0;
  return d;
}

}  // namespace

KashinFrame::KashinFrame(size_t chunk_len, uint64_t seed,
                         const KashinConfig& cfg)
    : c_(chunk_len),
      k_(kashin_len(chunk_len, cfg.lambda, cfg.granularity)),
      e_(k_ - chunk_len),
      cfg_(cfg),
      d1_(rademacher(chunk_len, mix_key(seed, 0x6b31))),
      da_(rademacher(chunk_len, mix_key(seed, 0x6b32))),
      db_(rademacher(chunk_len, mix_key(seed, 0x6b33))) {
  SCIONFL_ENFORCE(std::has_single_bit(chunk_len),
                  "kashin chunk length must be a power of two");
  SCIONFL_ENFORCE(e_ >= 1 && e_ <= c_, "kashin redundancy out of range");
}

// rot1 = D1*H/sqrt(c): the Rademacher sits on the data side so that the
// analysis of an unspread vector is still white.
std::vector<double> KashinFrame::rot1_fwd(std::span<const double> v) const {
  std::vector<double> out(v.begin(), v.end());
  fwht(out);
  const double s = 1.0 / std::sqrt(double(c_));
  for (size_t i = 0; i < c_; ++i) out[i] *= s * d1_[i];
  return out;
}

std::vector<double> KashinFrame::rot1_inv(std::span<const double> v) const {
  std::vector<double> out(c_);
  for (size_t i = 0; i < c_; ++i) out[i] = v[i] * d1_[i];
  fwht(out);
  const double s = 1.0 / std::sqrt(double(c_));
  for (double& x : out) x *= s;
  return out;
}

// rot2 = H*Da*H*Db/c, orthonormal and structurally independent of rot1.
std::vector<double> KashinFrame::rot2_fwd(std::span<const double> v) const {
  std::vector<double> out(c_);
  for (size_t i = 0; i < c_; ++i) out[i] = v[i] * db_[i];
  fwht(out);
  for (size_t i = 0; i < c_; ++i) out[i] *= da_[i];
  fwht(out);
  const double s = 1.0 / double(c_);
  for (double& x : out) x *= s;
  return out;
}

std::vector<double> KashinFrame::rot2_inv(std::span<const double> v) const {
  std::vector<double> out(v.begin(), v.end());
  fwht(out);
  for (size_t i = 0; i < c_; ++i) out[i] *= da_[i];
  fwht(out);
  const double s = 1.0 / double(c_);
  for (size_t i = 0; i < c_; ++i) out[i] *= s * db_[i];
  return out;
}

std::vector<double> KashinFrame::synthesize(
    std::span<const double> coeffs) const {
  SCIONFL_ENFORCE(coeffs.size() == k_, "coefficient length mismatch");
  std::vector<double> out = rot1_fwd(coeffs.subspan(0, c_));
  std::vector<double> pad(c_, 0.0);
  std::copy(coeffs.begin() + c_, coeffs.end(), pad.begin());
  std::vector<double> tail = rot2_fwd(pad);
  for (size_t i = 0; i < c_; ++i) out[i] += tail[i];
  return out;
}

std::vector<double> KashinFrame::least_norm(
    std::span<const double> residual) const {
  SCIONFL_ENFORCE(residual.size() == c_, "residual length mismatch");
  // S*S^T = I + P with P the projection onto the partial second block, so
  // (S*S^T)^-1 = I - P/2 and the projection onto {S a = r} is exact.
  std::vector<double> u = rot2_inv(residual);
  std::fill(u.begin() + e_, u.end(), 0.0);
  std::vector<double> pu = rot2_fwd(u);
  std::vector<double> v(c_);
  for (size_t i = 0; i < c_; ++i) v[i] = residual[i] - 0.5 * pu[i];
  std::vector<double> a1 = rot1_inv(v);
  std::vector<double> a2 = rot2_inv(v);
  std::vector<double> out(k_);
  std::copy(a1.begin(), a1.end(), out.begin());
  std::copy(a2.begin(), a2.begin() + e_, out.begin() + c_);
  return out;
}

std::vector<double> KashinFrame::decompose(std::span<const double> x) const {
  SCIONFL_ENFORCE(x.size() == c_, "input length mismatch");
  double norm = 0.0;
  for (double v : x) {
    SCIONFL_ENFORCE(std::isfinite(v), "kashin input must be finite");
    norm += v * v;
  }
  std::vector<double> a = least_norm(x);
  if (norm == 0.0) return a;
  const double level =
      cfg_.clip_eta * std::sqrt(norm) / std::sqrt(double(k_));
  std::vector<double> clipped(k_);
  for (int it = 0; it < cfg_.iterations; ++it) {
    for (size_t i = 0; i < k_; ++i) {
      clipped[i] = std::clamp(a[i], -level, level);
    }
    std::vector<double> back = synthesize(clipped);
    std::vector<double> r(c_);
    for (size_t i = 0; i < c_; ++i) r[i] = x[i] - back[i];
    std::vector<double> corr = least_norm(r);
    for (size_t i = 0; i < k_; ++i) a[i] = clipped[i] + corr[i];
  }
  return a;
}

std::vector<double> kashin_decompose(std::span<const double> x, uint64_t seed,
                                     const KashinConfig& cfg) {
  return KashinFrame(x.size(), seed, cfg).decompose(x);
}

std::vector<double> kashin_reconstruct(std::span<const double> coeffs,
                                       size_t data_len, uint64_t seed,
                                       const KashinConfig& cfg) {
  return KashinFrame(data_len, seed, cfg).synthesize(coeffs);
}

}  // namespace scionfl::quantize
