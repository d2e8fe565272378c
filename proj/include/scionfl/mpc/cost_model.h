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

namespace scionfl::mpc {

// Communication-cost constants. OT is an ideal functionality with an
// amortized per-instance cost (silent-OT style); the product-share material
// for one ring multiplication (including its truncation pair) is likewise a
// single calibrated constant. Both defaults are calibrated against the
// published per-round MiB figures and documented in the README.
struct CostModel {
  uint64_t ring_bits = 32;
  uint64_t ot_bits = 66;
  uint64_t mult_triple_bits = 3388;
  // Ideal secure-comparison check used by the robustness layer.
  uint64_t compare_bits = 96;
};

}  // namespace scionfl::mpc
