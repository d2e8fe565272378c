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

#include <cstddef>
#include <optional>
#include <vector>

#include "scionfl/quantize.h"

namespace scionfl::robust {

using quantize::QuantizedVector;

struct DefenseConfig {
  double mu_threshold = 3.0;  // norm clipping factor over the average L2
  // Number of most-deviating updates to drop; when unset, ceil of the
  // fraction below.
  std::optional<size_t> filter_count;
  double filter_fraction = 0.2;
  double momentum = 0.9;  // server optimizer momentum
};

size_t resolve_filter_count(const DefenseConfig& cfg, size_t n);

// Mean of the dequantized updates (back in the input domain).
std::vector<double> aggregate_quantized(
    const std::vector<QuantizedVector>& updates);

// Mean in the transformed payload domain; the defense operates here.
std::vector<double> aggregate_quantized_raw(
    const std::vector<QuantizedVector>& updates);

// L2 norm of the payload-domain reconstruction from bit counts only:
// sqrt(sum_chunks N_zero*s_min^2 + N_one*s_max^2).
double l2_norm_q(const QuantizedVector& qv);

// Norm-bounded copy: if the quantized norm exceeds mu_th * l2_avg, both
// scales shrink by mu_th*l2_avg/norm; the bits never change.
QuantizedVector scale_by_norm(const QuantizedVector& qv, double mu_threshold,
                              double l2_avg);

// Cosine similarity between the payload-domain reconstruction and a dense
// reference, computed from bit sums:
//   gamma = s_min * sum(S) + (bits . S) * (s_max - s_min), per chunk,
// then gamma / (||qv|| * ||S||).
double cosine_distance_q(const QuantizedVector& qv,
                         std::span<const double> reference);
// Same ranking without the division by ||reference||.
double cosine_score_unnormalized(const QuantizedVector& qv,
                                 std::span<const double> reference);

struct DefenseOutcome {
  std::vector<double> aggregate;      // mean of the kept updates
  std::vector<size_t> excluded;      // indices dropped, ascending
  std::vector<double> cosines;       // post-scaling similarity per client
};

// Two-stage filter: norm scaling against mu_th * average-L2, then removal of
// the filter_count updates with the largest angular deviation from the
// all-inclusive aggregate. Ties break toward the lower client index.
DefenseOutcome aura_defend(const std::vector<QuantizedVector>& updates,
                           const DefenseConfig& cfg);

// Client-assisted norm check: accepts when claimed^2 matches the bit-count
// norm within fixed-point tolerance and claimed * reciprocal is 1 within
// fixed-point tolerance.
bool verify_client_norm(double claimed_l2, double claimed_reciprocal,
                        const QuantizedVector& qv);

}  // namespace scionfl::robust
