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
#include <optional>
#include <span>
#include <vector>

#include "scionfl/chunking.h"
#include "scionfl/kashin.h"
#include "scionfl/prng.h"

namespace scionfl::quantize {

struct QuantizedChunk {
  size_t offset = 0;
  size_t length = 0;
  double s_min = 0.0;
  double s_max = 0.0;
};

// One-bit stochastically quantized gradient: the sign payload plus per-chunk
// scales. For HSQ/KSQ the bits live in the transformed domain and the chunk
// table describes that domain (Kashin chunks are lambda-inflated).
struct QuantizedVector {
  Scheme scheme = Scheme::kSQ;
  uint64_t rotation_seed = 0;
  size_t original_len = 0;
  std::vector<uint8_t> bits;
  std::vector<QuantizedChunk> chunks;

  size_t payload_len() const { return bits.size(); }
  bool layout_matches(const QuantizedVector& other) const;
};

// Per-chunk scale override; used for the global-scales mode where all clients
// share one (s_min, s_max) pair per chunk.
using GlobalScales = std::vector<std::pair<double, double>>;

struct QuantizeOptions {
  size_t min_chunk = 512;
  std::optional<GlobalScales> global_scales;  // local scales when absent
  KashinConfig kashin;
};

QuantizedVector sq_quantize(std::span<const double> x, Prng& rng,
                            const QuantizeOptions& opts = {});
QuantizedVector hsq_quantize(std::span<const double> x, uint64_t rotation_seed,
                             Prng& rng, const QuantizeOptions& opts = {});
QuantizedVector ksq_quantize(std::span<const double> x, uint64_t rotation_seed,
                             Prng& rng, const QuantizeOptions& opts = {});

// Per-chunk affine reconstruction in the quantized (transformed) domain.
std::vector<double> dequantize_raw(const QuantizedVector& qv);
// Full reconstruction back in the input domain, trailing padding dropped.
std::vector<double> dequantize(const QuantizedVector& qv);

// Maps a transformed-domain dense vector back to the input domain. Used when
// aggregation happened on payload bits and the inverse transform is applied
// once to the aggregate.
std::vector<double> inverse_transform(std::span<const double> raw,
                                      Scheme scheme, uint64_t rotation_seed,
                                      size_t original_len,
                                      const std::vector<QuantizedChunk>& chunks,
                                      const KashinConfig& kashin = {});

// Transformed-domain representation of an input vector (identity for SQ).
// Both quantization and the per-chunk scale computation run on this form.
std::vector<double> forward_transform(std::span<const double> x, Scheme scheme,
                                      uint64_t rotation_seed,
                                      const ChunkPlan& plan,
                                      const KashinConfig& kashin = {});

// Chunk layout of the transformed domain for a given input length.
std::vector<QuantizedChunk> payload_layout(Scheme scheme, size_t m,
                                           size_t min_chunk = 512,
                                           const KashinConfig& kashin = {});

// Normalized mean square error of an aggregate estimate against the true
// client mean: ||mean - agg||^2 / (sum_i ||v_i||^2 / n).
double nmse(std::span<const double> agg,
            const std::vector<std::vector<double>>& originals);

// Byte-exact wire format: header, chunk table with 32-bit fixed-point
// scales, then the LSB-first packed bit payload. See README for the layout.
std::vector<uint8_t> serialize(const QuantizedVector& qv);
QuantizedVector deserialize(std::span<const uint8_t> bytes);

}  // namespace scionfl::quantize
