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

#include "scionfl/robust/defense.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scionfl/base.h"
#include "scionfl/ring.h"

namespace scionfl::robust {
namespace {

constexpr double kFxpUlp = 1.0 / 65536.0;

void check_layouts(const std::vector<QuantizedVector>& updates) {
  SCIONFL_ENFORCE(!updates.empty(), "need at least one update");
  for (size_t i = 1; i < updates.size(); ++i) {
    SCIONFL_ENFORCE(updates[i].layout_matches(updates[0]),
                    "updates must share one chunk plan");
  }
}

}  // namespace

size_t resolve_filter_count(const DefenseConfig& cfg, size_t n) {
  if (cfg.filter_count) return *cfg.filter_count;
  return static_cast<size_t>(
      std::ceil(cfg.filter_fraction * static_cast<double>(n)));
}

std::vector<double> aggregate_quantized(
    const std::vector<QuantizedVector>& updates) {
  check_layouts(updates);
  std::vector<double> sum;
  for (const auto& qv : updates) {
    auto x = quantize::dequantize(qv);
    if (sum.empty()) sum.assign(x.size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i) sum[i] += x[i];
  }
  for (double& v : sum) v /= static_cast<double>(updates.size());
  return sum;
}

std::vector<double> aggregate_quantized_raw(
    const std::vector<QuantizedVector>& updates) {
  check_layouts(updates);
  std::vector<double> sum;
  for (const auto& qv : updates) {
    auto x = quantize::dequantize_raw(qv);
    if (sum.empty()) sum.assign(x.size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i) sum[i] += x[i];
  }
  for (double& v : sum) v /= static_cast<double>(updates.size());
  return sum;
}

double l2_norm_q(const QuantizedVector& qv) {
  double acc = 0.0;
  for (const auto& ch : qv.chunks) {
    size_t ones = 0;
    for (size_t i = 0; i < ch.length; ++i) ones += qv.bits[ch.offset + i];
    const double zeros = static_cast<double>(ch.length - ones);
    acc += zeros * ch.s_min * ch.s_min +
           static_cast<double>(ones) * ch.s_max * ch.s_max;
  }
  return std::sqrt(acc);
}

QuantizedVector scale_by_norm(const QuantizedVector& qv, double mu_threshold,
                              double l2_avg) {
  SCIONFL_ENFORCE(l2_avg > 0.0, "average norm must be positive");
  const double bound = mu_threshold * l2_avg;
  const double norm = l2_norm_q(qv);
  if (norm <= bound) return qv;
  const double factor = bound / norm;
  QuantizedVector out = qv;
  for (auto& ch : out.chunks) {
    ch.s_min *= factor;
    ch.s_max *= factor;
  }
  return out;
}

double cosine_score_unnormalized(const QuantizedVector& qv,
                                 std::span<const double> reference) {
  SCIONFL_ENFORCE(reference.size() == qv.bits.size(),
                  "reference must live in the payload domain");
  double gamma = 0.0;
  for (const auto& ch : qv.chunks) {
    double ref_sum = 0.0;
    double ref_dot_bits = 0.0;
    for (size_t i = 0; i < ch.length; ++i) {
      ref_sum += reference[ch.offset + i];
      if (qv.bits[ch.offset + i]) ref_dot_bits += reference[ch.offset + i];
    }
    gamma += ch.s_min * ref_sum + ref_dot_bits * (ch.s_max - ch.s_min);
  }
  return gamma;
}

double cosine_distance_q(const QuantizedVector& qv,
                         std::span<const double> reference) {
  double ref_norm = 0.0;
  for (double v : reference) ref_norm += v * v;
  ref_norm = std::sqrt(ref_norm);
  const double qnorm = l2_norm_q(qv);
  SCIONFL_ENFORCE(qnorm > 0.0 && ref_norm > 0.0,
                  "cosine undefined for zero-norm inputs");
  return cosine_score_unnormalized(qv, reference) / (qnorm * ref_norm);
}

DefenseOutcome aura_defend(const std::vector<QuantizedVector>& updates,
                           const DefenseConfig& cfg) {
  const size_t n = updates.size();
  SCIONFL_ENFORCE(n >= 2, "defense needs at least two updates");
  SCIONFL_ENFORCE(cfg.mu_threshold > 0.0, "mu threshold must be positive");
  const size_t psi = resolve_filter_count(cfg, n);
  SCIONFL_ENFORCE(psi < n, "cannot exclude every update");
  check_layouts(updates);

  // Reference direction: aggregate of everything, poisoned or not.
  std::vector<double> reference = aggregate_quantized_raw(updates);

  std::vector<double> norms(n);
  double avg = 0.0;
  for (size_t i = 0; i < n; ++i) {
    norms[i] = l2_norm_q(updates[i]);
    avg += norms[i];
  }
  avg /= static_cast<double>(n);
  SCIONFL_ENFORCE(avg > 0.0, "degenerate updates: zero average norm");

  std::vector<QuantizedVector> scaled;
  scaled.reserve(n);
  for (const auto& qv : updates) {
    scaled.push_back(scale_by_norm(qv, cfg.mu_threshold, avg));
  }

  DefenseOutcome out;
  out.cosines.resize(n);
  for (size_t i = 0; i < n; ++i) {
    out.cosines[i] = cosine_distance_q(scaled[i], reference);
  }

  // Top-psi by angular deviation = lowest similarity; ties by client index.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return out.cosines[a] < out.cosines[b];
  });
  out.excluded.assign(order.begin(), order.begin() + psi);
  std::sort(out.excluded.begin(), out.excluded.end());

  std::vector<QuantizedVector> kept;
  kept.reserve(n - psi);
  for (size_t i = 0; i < n; ++i) {
    if (!std::binary_search(out.excluded.begin(), out.excluded.end(), i)) {
      kept.push_back(scaled[i]);
    }
  }
  out.aggregate = aggregate_quantized(kept);
  return out;
}

bool verify_client_norm(double claimed_l2, double claimed_reciprocal,
                        const QuantizedVector& qv) {
  if (!(claimed_l2 > 0.0) || !std::isfinite(claimed_l2) ||
      !std::isfinite(claimed_reciprocal)) {
    return false;
  }
  double norm_sq = 0.0;
  for (const auto& ch : qv.chunks) {
    size_t ones = 0;
    for (size_t i = 0; i < ch.length; ++i) ones += qv.bits[ch.offset + i];
    norm_sq += static_cast<double>(ch.length - ones) * ch.s_min * ch.s_min +
               static_cast<double>(ones) * ch.s_max * ch.s_max;
  }
  // One fixed-point rounding of the claimed norm shifts its square by up to
  // (2*claimed + ulp) * ulp; the reciprocal check gets the matching slack.
  const double sq_tol = (2.0 * claimed_l2 + kFxpUlp) * kFxpUlp;
  if (std::abs(claimed_l2 * claimed_l2 - norm_sq) > sq_tol) return false;
  const double recip_tol =
      (claimed_l2 + std::abs(claimed_reciprocal) + kFxpUlp) * kFxpUlp;
  return std::abs(claimed_l2 * claimed_reciprocal - 1.0) <= recip_tol;
}

}  // namespace scionfl::robust
