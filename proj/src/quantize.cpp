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

#include "scionfl/quantize.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "scionfl/base.h"
#include "scionfl/hadamard.h"
#include "scionfl/ring.h"

namespace scionfl::quantize {
namespace {

void check_finite(std::span<const double> x) {
  for (double v : x) {
    SCIONFL_ENFORCE(std::isfinite(v), "quantize input must be finite");
  }
}

uint64_t chunk_seed(uint64_t rotation_seed, size_t chunk_idx) {
  return mix_key(rotation_seed, 0xc400 + chunk_idx);
}

// Bernoulli payload for one chunk of the transformed vector.
void quantize_chunk(std::span<const double> data, const QuantizedChunk& ch,
                    Prng& rng, std::vector<uint8_t>& bits) {
  const double range = ch.s_max - ch.s_min;
  for (double v : data) {
    if (range <= 0.0) {
      bits.push_back(0);
      rng.next_unit();  // keep the stream position data-independent
      continue;
    }
    double p = (v - ch.s_min) / range;
    p = std::clamp(p, 0.0, 1.0);
    bits.push_back(rng.next_unit() < p ? 1 : 0);
  }
}

QuantizedVector quantize_transformed(std::span<const double> transformed,
                                     Scheme scheme, uint64_t rotation_seed,
                                     size_t original_len,
                                     std::vector<QuantizedChunk> layout,
                                     Prng& rng, const QuantizeOptions& opts) {
  if (opts.global_scales) {
    SCIONFL_ENFORCE(opts.global_scales->size() == layout.size(),
                    "global scales must cover every chunk");
    for (size_t i = 0; i < layout.size(); ++i) {
      layout[i].s_min = (*opts.global_scales)[i].first;
      layout[i].s_max = (*opts.global_scales)[i].second;
      SCIONFL_ENFORCE(layout[i].s_min <= layout[i].s_max,
                      "global s_min must not exceed s_max");
    }
  } else {
    for (auto& ch : layout) {
      auto begin = transformed.begin() + ch.offset;
      auto [lo, hi] = std::minmax_element(begin, begin + ch.length);
      ch.s_min = *lo;
      ch.s_max = *hi;
    }
  }

  QuantizedVector qv;
  qv.scheme = scheme;
  qv.rotation_seed = rotation_seed;
  qv.original_len = original_len;
  qv.chunks = std::move(layout);
  qv.bits.reserve(transformed.size());
  for (const auto& ch : qv.chunks) {
    quantize_chunk(transformed.subspan(ch.offset, ch.length), ch, rng,
                   qv.bits);
  }
  return qv;
}

}  // namespace

bool QuantizedVector::layout_matches(const QuantizedVector& other) const {
  if (scheme != other.scheme || rotation_seed != other.rotation_seed ||
      original_len != other.original_len ||
      chunks.size() != other.chunks.size()) {
    return false;
  }
  for (size_t i = 0; i < chunks.size(); ++i) {
    if (chunks[i].offset != other.chunks[i].offset ||
        chunks[i].length != other.chunks[i].length) {
      return false;
    }
  }
  return true;
}

std::vector<QuantizedChunk> payload_layout(Scheme scheme, size_t m,
                                           size_t min_chunk,
                                           const KashinConfig& kashin) {
  std::vector<QuantizedChunk> out;
  if (scheme == Scheme::kSQ) {
    out.push_back({0, m, 0.0, 0.0});
    return out;
  }
  ChunkPlan plan = chunk_plan(m, min_chunk);
  size_t offset = 0;
  for (size_t c : plan.sizes) {
    size_t len = scheme == Scheme::kKSQ
                     ? kashin_len(c, kashin.lambda, kashin.granularity)
                     : c;
    out.push_back({offset, len, 0.0, 0.0});
    offset += len;
  }
  return out;
}

std::vector<double> forward_transform(std::span<const double> x, Scheme scheme,
                                      uint64_t rotation_seed,
                                      const ChunkPlan& plan,
                                      const KashinConfig& kashin) {
  if (scheme == Scheme::kSQ) {
    return std::vector<double>(x.begin(), x.end());
  }
  std::vector<double> out;
  size_t consumed = 0;
  for (size_t i = 0; i < plan.sizes.size(); ++i) {
    const size_t c = plan.sizes[i];
    std::vector<double> piece(c, 0.0);
    const size_t take = std::min(c, x.size() - consumed);
    std::copy(x.begin() + consumed, x.begin() + consumed + take,
              piece.begin());
    consumed += take;
    if (scheme == Scheme::kHSQ) {
      auto rotated = hadamard_rotate(piece, chunk_seed(rotation_seed, i));
      out.insert(out.end(), rotated.begin(), rotated.end());
    } else {
      KashinFrame frame(c, chunk_seed(rotation_seed, i), kashin);
      auto coeffs = frame.decompose(piece);
      out.insert(out.end(), coeffs.begin(), coeffs.end());
    }
  }
  return out;
}

std::vector<double> inverse_transform(std::span<const double> raw,
                                      Scheme scheme, uint64_t rotation_seed,
                                      size_t original_len,
                                      const std::vector<QuantizedChunk>& chunks,
                                      const KashinConfig& kashin) {
  if (scheme == Scheme::kSQ) {
    SCIONFL_ENFORCE(raw.size() >= original_len, "payload shorter than input");
    return std::vector<double>(raw.begin(), raw.begin() + original_len);
  }
  // Data-domain chunk length: equal to the payload length for HSQ, the
  // pre-inflation power of two for KSQ.
  auto data_len_of = [&](size_t payload_len) -> size_t {
    if (scheme == Scheme::kHSQ) return payload_len;
    for (size_t c = kashin.granularity; c <= payload_len; c <<= 1) {
      if (kashin_len(c, kashin.lambda, kashin.granularity) == payload_len) {
        return c;
      }
    }
    SCIONFL_ENFORCE(false, "no chunk length maps to payload ", payload_len);
  };
  std::vector<double> out;
  out.reserve(raw.size());
  for (size_t i = 0; i < chunks.size(); ++i) {
    const size_t c = data_len_of(chunks[i].length);
    auto piece = raw.subspan(chunks[i].offset, chunks[i].length);
    if (scheme == Scheme::kHSQ) {
      auto data = inverse_hadamard_rotate(piece, chunk_seed(rotation_seed, i));
      out.insert(out.end(), data.begin(), data.end());
    } else {
      KashinFrame frame(c, chunk_seed(rotation_seed, i), kashin);
      auto data = frame.synthesize(piece);
      out.insert(out.end(), data.begin(), data.end());
    }
  }
  out.resize(original_len);
  return out;
}

QuantizedVector sq_quantize(std::span<const double> x, Prng& rng,
                            const QuantizeOptions& opts) {
  SCIONFL_ENFORCE(!x.empty(), "cannot quantize an empty vector");
  check_finite(x);
  return quantize_transformed(x, Scheme::kSQ, 0, x.size(),
                              payload_layout(Scheme::kSQ, x.size()), rng,
                              opts);
}

QuantizedVector hsq_quantize(std::span<const double> x, uint64_t rotation_seed,
                             Prng& rng, const QuantizeOptions& opts) {
  SCIONFL_ENFORCE(!x.empty(), "cannot quantize an empty vector");
  check_finite(x);
  ChunkPlan plan = chunk_plan(x.size(), opts.min_chunk);
  auto transformed =
      forward_transform(x, Scheme::kHSQ, rotation_seed, plan, opts.kashin);
  return quantize_transformed(
      transformed, Scheme::kHSQ, rotation_seed, x.size(),
      payload_layout(Scheme::kHSQ, x.size(), opts.min_chunk, opts.kashin), rng,
      opts);
}

QuantizedVector ksq_quantize(std::span<const double> x, uint64_t rotation_seed,
                             Prng& rng, const QuantizeOptions& opts) {
  SCIONFL_ENFORCE(!x.empty(), "cannot quantize an empty vector");
  check_finite(x);
  ChunkPlan plan = chunk_plan(x.size(), opts.min_chunk);
  auto transformed =
      forward_transform(x, Scheme::kKSQ, rotation_seed, plan, opts.kashin);
  return quantize_transformed(
      transformed, Scheme::kKSQ, rotation_seed, x.size(),
      payload_layout(Scheme::kKSQ, x.size(), opts.min_chunk, opts.kashin), rng,
      opts);
}

std::vector<double> dequantize_raw(const QuantizedVector& qv) {
  std::vector<double> out(qv.bits.size());
  for (const auto& ch : qv.chunks) {
    const double range = ch.s_max - ch.s_min;
    for (size_t i = 0; i < ch.length; ++i) {
      out[ch.offset + i] = ch.s_min + (qv.bits[ch.offset + i] ? range : 0.0);
    }
  }
  return out;
}

std::vector<double> dequantize(const QuantizedVector& qv) {
  auto raw = dequantize_raw(qv);
  return inverse_transform(raw, qv.scheme, qv.rotation_seed, qv.original_len,
                           qv.chunks);
}

double nmse(std::span<const double> agg,
            const std::vector<std::vector<double>>& originals) {
  SCIONFL_ENFORCE(!originals.empty(), "nmse needs at least one original");
  const size_t d = agg.size();
  double denom = 0.0;
  std::vector<double> mean(d, 0.0);
  for (const auto& v : originals) {
    SCIONFL_ENFORCE(v.size() == d, "nmse dimension mismatch");
    double sq = 0.0;
    for (size_t i = 0; i < d; ++i) {
      mean[i] += v[i];
      sq += v[i] * v[i];
    }
    denom += sq;
  }
  denom /= double(originals.size());
  SCIONFL_ENFORCE(denom > 0.0, "nmse undefined for all-zero originals");
  double num = 0.0;
  for (size_t i = 0; i < d; ++i) {
    double diff = mean[i] / double(originals.size()) - agg[i];
    num += diff * diff;
  }
  return num / denom;
}

namespace {

constexpr char kMagic[4] = {'S', 'F', 'Q', 'V'};

template <typename T>
void put(std::vector<uint8_t>& out, T v) {
  for (size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
}

template <typename T>
T get(std::span<const uint8_t> in, size_t& pos) {
  SCIONFL_ENFORCE(pos + sizeof(T) <= in.size(), "truncated buffer");
  T v = 0;
  for (size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(in[pos + i]) << (8 * i);
  }
  pos += sizeof(T);
  return v;
}

}  // namespace

std::vector<uint8_t> serialize(const QuantizedVector& qv) {
  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put<uint8_t>(out, 1);  // version
  put<uint8_t>(out, static_cast<uint8_t>(qv.scheme));
  put<uint16_t>(out, 0);
  put<uint64_t>(out, qv.rotation_seed);
  put<uint32_t>(out, static_cast<uint32_t>(qv.original_len));
  put<uint32_t>(out, static_cast<uint32_t>(qv.chunks.size()));
  for (const auto& ch : qv.chunks) {
    put<uint32_t>(out, static_cast<uint32_t>(ch.offset));
    put<uint32_t>(out, static_cast<uint32_t>(ch.length));
    put<uint32_t>(out, ring::fxp_encode(ch.s_min));
    put<uint32_t>(out, ring::fxp_encode(ch.s_max));
  }
  // LSB-first packed payload.
  size_t nbytes = (qv.bits.size() + 7) / 8;
  size_t payload_start = out.size();
  out.resize(out.size() + nbytes, 0);
  for (size_t i = 0; i < qv.bits.size(); ++i) {
    if (qv.bits[i]) out[payload_start + i / 8] |= uint8_t(1u << (i % 8));
  }
  return out;
}

QuantizedVector deserialize(std::span<const uint8_t> bytes) {
  size_t pos = 0;
  SCIONFL_ENFORCE(bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0,
                  "bad magic");
  pos = 4;
  auto version = get<uint8_t>(bytes, pos);
  SCIONFL_ENFORCE(version == 1, "unsupported version");
  QuantizedVector qv;
  qv.scheme = static_cast<Scheme>(get<uint8_t>(bytes, pos));
  get<uint16_t>(bytes, pos);
  qv.rotation_seed = get<uint64_t>(bytes, pos);
  qv.original_len = get<uint32_t>(bytes, pos);
  auto count = get<uint32_t>(bytes, pos);
  size_t total = 0;
  for (uint32_t i = 0; i < count; ++i) {
    QuantizedChunk ch;
    ch.offset = get<uint32_t>(bytes, pos);
    ch.length = get<uint32_t>(bytes, pos);
    ch.s_min = ring::fxp_decode(get<uint32_t>(bytes, pos));
    ch.s_max = ring::fxp_decode(get<uint32_t>(bytes, pos));
    SCIONFL_ENFORCE(ch.offset == total, "chunk table must be contiguous");
    total += ch.length;
    qv.chunks.push_back(ch);
  }
  size_t nbytes = (total + 7) / 8;
  SCIONFL_ENFORCE(pos + nbytes <= bytes.size(), "truncated payload");
  qv.bits.resize(total);
  for (size_t i = 0; i < total; ++i) {
    qv.bits[i] = (bytes[pos + i / 8] >> (i % 8)) & 1;
  }
  return qv;
}

}  // namespace scionfl::quantize
