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

// In-place fast Walsh-Hadamard transform; length must be a power of two.
void fwht(std::span<double> data);

// Randomized rotation y = (1/sqrt(m)) * H * D * x with D a seed-derived
// Rademacher diagonal. Orthonormal, so the inverse is D * H * (1/sqrt(m)).
std::vector<double> hadamard_rotate(std::span<const double> x, uint64_t seed);
std::vector<double> inverse_hadamard_rotate(std::span<const double> y,
                                            uint64_t seed);

}  // namespace scionfl::quantize
