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
#include <string>
#include <vector>

namespace scionfl::quantize {

enum class Scheme { kSQ, kHSQ, kKSQ };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// Decomposition of a gradient into decreasing power-of-two chunks, the last
// one padded up to the nearest power of two >= min_chunk. Keeping the
// smallest chunk above the threshold bounds the per-chunk scale overhead.
struct ChunkPlan {
  size_t original_len = 0;
  size_t min_chunk = 512;
  std::vector<size_t> sizes;

  size_t padded_len() const;
  size_t chunk_count() const { return sizes.size(); }
};

ChunkPlan chunk_plan(size_t m, size_t min_chunk = 512);

// Coefficient count for the redundant representation of one chunk: lambda*c
// rounded up to a multiple of the chunk threshold.
size_t kashin_len(size_t chunk_len, double lambda = 1.15,
                  size_t granularity = 512);

// Transmitted bits for an arbitrary flat gradient of length m: the bit
// payload plus two 32-bit scales per chunk for the transformed schemes
// (plain SQ sends one bit per coordinate).
uint64_t quantized_bits(Scheme scheme, size_t m, size_t min_chunk = 512);

// Reference padded layouts for the evaluated network architectures. The
// small net is derived from the flat chunk plan; the residual nets carry the
// per-tensor layouts their published bit budgets correspond to.
struct ArchLayout {
  std::string name;
  size_t params;
  std::vector<size_t> chunk_sizes;        // HSQ layout
  std::vector<size_t> kashin_chunk_sizes; // KSQ layout (pre-inflation)
};

const std::vector<ArchLayout>& reference_architectures();
uint64_t arch_quantized_bits(const ArchLayout& arch, Scheme scheme);

}  // namespace scionfl::quantize
