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

#include "scionfl/chunking.h"

#include <bit>

#include "scionfl/base.h"

namespace scionfl::quantize {
namespace {

size_t floor_pow2(size_t v) { return std::bit_floor(v); }
size_t ceil_pow2(size_t v) { return std::bit_ceil(v); }

constexpr uint64_t kScaleBitsPerChunk = 64;  // two 32-bit scales

std::vector<size_t> repeat_512(size_t n, std::vector<size_t> head) {
  head.insert(head.end(), n, 512);
  return head;
}

}  // namespace

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kSQ:
      return "sq";
    case Scheme::kHSQ:
      return "hsq";
    case Scheme::kKSQ:
      return "ksq";
  }
  return "sq";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "sq" || name == "SQ") return Scheme::kSQ;
  if (name == "hsq" || name == "HSQ") return Scheme::kHSQ;
  if (name == "ksq" || name == "KSQ") return Scheme::kKSQ;
  SCIONFL_ENFORCE(false, "unknown scheme: ", name);
}

size_t ChunkPlan::padded_len() const {
  size_t total = 0;
  for (size_t s : sizes) total += s;
  return total;
}

ChunkPlan chunk_plan(size_t m, size_t min_chunk) {
  SCIONFL_ENFORCE(m >= 1, "chunk_plan needs m >= 1");
  SCIONFL_ENFORCE(min_chunk >= 1 && std::has_single_bit(min_chunk),
                  "min_chunk must be a power of two");
  ChunkPlan plan;
  plan.original_len = m;
  plan.min_chunk = min_chunk;
  size_t rem = m;
  while (rem > 0) {
    size_t p = floor_pow2(rem);
    if (p >= min_chunk) {
      plan.sizes.push_back(p);
      rem -= p;
    } else {
      // Remainder below the threshold: inflate to one final padded chunk.
      plan.sizes.push_back(ceil_pow2(min_chunk > rem ? min_chunk : rem));
      rem = 0;
    }
  }
  return plan;
}

size_t kashin_len(size_t chunk_len, double lambda, size_t granularity) {
  SCIONFL_ENFORCE(chunk_len >= 1);
  auto target = static_cast<size_t>(lambda * static_cast<double>(chunk_len));
  if (static_cast<double>(target) < lambda * static_cast<double>(chunk_len)) {
    ++target;
  }
  size_t units = (target + granularity - 1) / granularity;
  return units * granularity;
}

uint64_t quantized_bits(Scheme scheme, size_t m, size_t min_chunk) {
  if (scheme == Scheme::kSQ) return m;
  ChunkPlan plan = chunk_plan(m, min_chunk);
  uint64_t payload = 0;
  for (size_t c : plan.sizes) {
    payload += (scheme == Scheme::kKSQ) ? kashin_len(c, 1.15, min_chunk) : c;
  }
  return payload + kScaleBitsPerChunk * plan.chunk_count();
}

const std::vector<ArchLayout>& reference_architectures() {
  static const std::vector<ArchLayout> archs = [] {
    std::vector<ArchLayout> v;
    {
      ArchLayout a;
      a.name = "lenet";
      a.params = 61706;
      a.chunk_sizes = chunk_plan(a.params).sizes;
      a.kashin_chunk_sizes = a.chunk_sizes;
      v.push_back(std::move(a));
    }
    {
      ArchLayout a;
      a.name = "resnet9";
      a.params = 4903242;
      a.chunk_sizes = repeat_512(
          28, {4194304, 524288, 131072, 32768, 8192, 4096, 2048, 2048});
      a.kashin_chunk_sizes =
          repeat_512(31, {4194304, 524288, 262144, 2048, 2048});
      v.push_back(std::move(a));
    }
    {
      ArchLayout a;
      a.name = "resnet18";
      a.params = 11220132;
      a.chunk_sizes =
          repeat_512(29, {4194304, 4194304, 2097152, 524288, 131072, 65536,
                          32768, 8192, 4096, 2048, 1024});
      a.kashin_chunk_sizes = repeat_512(34, {4194304, 4194304, 2097152, 262144,
                                             131072, 16384, 8192, 4096});
      v.push_back(std::move(a));
    }
    return v;
  }();
  return archs;
}

uint64_t arch_quantized_bits(const ArchLayout& arch, Scheme scheme) {
  if (scheme == Scheme::kSQ) return arch.params;
  const auto& chunks =
      scheme == Scheme::kKSQ ? arch.kashin_chunk_sizes : arch.chunk_sizes;
  uint64_t payload = 0;
  for (size_t c : chunks) {
    payload += (scheme == Scheme::kKSQ) ? kashin_len(c) : c;
  }
  return payload + kScaleBitsPerChunk * chunks.size();
}

}  // namespace scionfl::quantize
