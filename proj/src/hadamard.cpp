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

#include "scionfl/hadamard.h"

#include <bit>
#include <cmath>

#include "scionfl/base.h"
#include "scionfl/prng.h"

namespace scionfl::quantize {
namespace {

void apply_rademacher(std::span<double> data, uint64_t seed) {
  Prng rng(mix_key(seed, 0x48444d44 /* "HDMD" */));
  for (double& v : data) {
    if (rng.next_bit()) v = -v;
  }
}

}  // namespace

void fwht(std::span<double> data) {
  const size_t n = data.size();
  SCIONFL_ENFORCE(n >= 1 && std::has_single_bit(n),
                  "fwht length must be a power of two, got ", n);
  for (size_t h = 1; h < n; h <<= 1) {
    for (size_t i = 0; i < n; i += h << 1) {
      for (size_t j = i; j < i + h; ++j) {
        double a = data[j];
        double b = data[j + h];
        data[j] = a + b;
        data[j + h] = a - b;
      }
    }
  }
}

std::vector<double> hadamard_rotate(std::span<const double> x, uint64_t seed) {
  std::vector<double> y(x.begin(), x.end());
  apply_rademacher(y, seed);
  fwht(y);
  const double scale = 1.0 / std::sqrt(static_cast<double>(y.size()));
  for (double& v : y) v *= scale;
  return y;
}

std::vector<double> inverse_hadamard_rotate(std::span<const double> y,
                                            uint64_t seed) {
  std::vector<double> x(y.begin(), y.end());
  fwht(x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (double& v : x) v *= scale;
  apply_rademacher(x, seed);
  return x;
}

}  // namespace scionfl::quantize
