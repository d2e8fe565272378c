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
#include <span>
#include <vector>

namespace scionfl::quantize {

struct KashinConfig {
  double lambda = 1.15;
  size_t granularity = 512;
  // Alternating-projection rounds between the affine set {synth(a) = x} and
  // the L-inf ball; the clip level is eta*||x||/sqrt(K).
  int iterations = 5;
  double clip_eta = 1.3;
};

// Redundant tight-ish frame over R^c with K = kashin_len(c) columns: a full
// randomized Hadamard rotation next to the first K-c columns of a second,
// structurally independent rotation. The second block uses a two-layer
// H*D*H*D rotation; a single shared Hadamard would make the blocks
// sign-duplicates of each other and leave no usable null space.
class KashinFrame {
 public:
  KashinFrame(size_t chunk_len, uint64_t seed, const KashinConfig& cfg = {});

  size_t data_len() const { return c_; }
  size_t coeff_len() const { return k_; }

  std::vector<double> synthesize(std::span<const double> coeffs) const;
  // Least-norm preimage: synthesize(least_norm(r)) == r exactly.
  std::vector<double> least_norm(std::span<const double> residual) const;

  std::vector<double> decompose(std::span<const double> x) const;

 private:
  std::vector<double> rot1_fwd(std::span<const double> v) const;
  std::vector<double> rot1_inv(std::span<const double> v) const;
  std::vector<double> rot2_fwd(std::span<const double> v) const;
  std::vector<double> rot2_inv(std::span<const double> v) const;

  size_t c_;
  size_t k_;
  size_t e_;
  KashinConfig cfg_;
  std::vector<double> d1_;
  std::vector<double> da_;
  std::vector<double> db_;
};

std::vector<double> kashin_decompose(std::span<const double> x, uint64_t seed,
                                     const KashinConfig& cfg = {});
std::vector<double> kashin_reconstruct(std::span<const double> coeffs,
                                       size_t data_len, uint64_t seed,
                                       const KashinConfig& cfg = {});

}  // namespace scionfl::quantize
