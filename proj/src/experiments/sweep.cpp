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

#include "scionfl/experiments/sweep.h"

#include <cmath>
#include <future>

#include "scionfl/base.h"

namespace scionfl::experiments {
namespace {

using quantize::Scheme;

// Approximate arithmetic value of one bit under the masked conversion:
// b_hat = m + (1 - 2m) * approx(lambda shares), with a fresh uniform mask.
double approx_bit_value(uint8_t bit, int q, Prng& rng) {
  int ones = 0;
  for (int i = 0; i < q; ++i) ones += rng.next_bit() ? 1 : 0;
  const uint8_t lambda = static_cast<uint8_t>(ones & 1);
  const uint8_t masked = static_cast<uint8_t>((bit & 1) ^ lambda);
  double prod = 0.0;
  if (ones == q) {
    prod = 1.0;
    for (int i = 0; i < q - 1; ++i) prod *= -2.0;
  }
  const double mid = double((q - 1) % 2) - 0.5 * double(q);
  const double lambda_hat = double(ones) + mid + prod;
  return double(masked) + (1.0 - 2.0 * double(masked)) * lambda_hat;
}

}  // namespace

std::string scales_name(ScalesMode m) {
  return m == ScalesMode::kGlobal ? "global" : "local";
}
std::string conversion_name(Conversion c) {
  return c == Conversion::kExact ? "exact" : "approx";
}
std::string aggregation_name(Aggregation a) {
  return a == Aggregation::kDirect ? "direct" : "sepagg";
}
ScalesMode scales_from_name(const std::string& s) {
  if (s == "global") return ScalesMode::kGlobal;
  if (s == "local") return ScalesMode::kLocal;
  SCIONFL_ENFORCE(false, "unknown scales mode: ", s);
}
Conversion conversion_from_name(const std::string& s) {
  if (s == "exact") return Conversion::kExact;
  if (s == "approx") return Conversion::kApprox;
  SCIONFL_ENFORCE(false, "unknown conversion: ", s);
}
Aggregation aggregation_from_name(const std::string& s) {
  if (s == "direct") return Aggregation::kDirect;
  if (s == "sepagg" || s == "3") return Aggregation::kSepAgg;
  SCIONFL_ENFORCE(false, "unknown aggregation: ", s);
}

std::vector<double> simulate_quantized_mean(
    const std::vector<std::vector<double>>& updates, const PipelineConfig& cfg,
    uint64_t rotation_seed, Prng& rng) {
  const size_t n = updates.size();
  SCIONFL_ENFORCE(n >= 1, "need at least one update");
  const size_t d = updates[0].size();

  const auto plan = quantize::chunk_plan(d, cfg.min_chunk);
  auto layout =
      quantize::payload_layout(cfg.scheme, d, cfg.min_chunk, cfg.kashin);
  const size_t payload = layout.back().offset + layout.back().length;

  // Transformed-domain views of every update.
  std::vector<std::vector<double>> transformed(n);
  for (size_t i = 0; i < n; ++i) {
    SCIONFL_ENFORCE(updates[i].size() == d, "update dimension mismatch");
    transformed[i] = quantize::forward_transform(updates[i], cfg.scheme,
                                                 rotation_seed, plan,
                                                 cfg.kashin);
  }

  // Per-chunk scales: one pair per client, or one shared pair per chunk.
  std::vector<std::vector<std::pair<double, double>>> scales(
      n, std::vector<std::pair<double, double>>(layout.size()));
  for (size_t c = 0; c < layout.size(); ++c) {
    double glo = 0.0;
    double ghi = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double lo = transformed[i][layout[c].offset];
      double hi = lo;
      for (size_t k = 1; k < layout[c].length; ++k) {
        double v = transformed[i][layout[c].offset + k];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      scales[i][c] = {lo, hi};
      if (i == 0) {
        glo = lo;
        ghi = hi;
      } else {
        glo = std::min(glo, lo);
        ghi = std::max(ghi, hi);
      }
    }
    if (cfg.scales == ScalesMode::kGlobal) {
      for (size_t i = 0; i < n; ++i) scales[i][c] = {glo, ghi};
    }
  }

  // Quantize, convert, and aggregate in the compressed domain.
  std::vector<double> agg(payload, 0.0);
  std::vector<double> bit_sum;
  std::vector<double> range_sum;
  if (cfg.aggregation == Aggregation::kSepAgg) {
    bit_sum.assign(payload, 0.0);
    range_sum.assign(layout.size(), 0.0);
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t c = 0; c < layout.size(); ++c) {
      const auto [lo, hi] = scales[i][c];
      const double range = hi - lo;
      for (size_t k = 0; k < layout[c].length; ++k) {
        const double v = transformed[i][layout[c].offset + k];
        uint8_t bit = 0;
        if (range > 0.0) {
          double p = (v - lo) / range;
          bit = rng.next_unit() < p ? 1 : 0;
        } else {
          rng.next_unit();
        }
        double bhat = cfg.conversion == Conversion::kExact
                          ? double(bit)
                          : approx_bit_value(bit, cfg.shares, rng);
        if (cfg.aggregation == Aggregation::kSepAgg) {
          bit_sum[layout[c].offset + k] += bhat;
        } else {
          agg[layout[c].offset + k] += lo + bhat * range;
        }
      }
      if (cfg.aggregation == Aggregation::kSepAgg) {
        range_sum[c] += range;
        for (size_t k = 0; k < layout[c].length; ++k) {
          agg[layout[c].offset + k] += lo;
        }
      }
    }
  }
  if (cfg.aggregation == Aggregation::kSepAgg) {
    // sum_i b_i*s_i ~ (1/n) (sum b)(sum s) per coordinate.
    for (size_t c = 0; c < layout.size(); ++c) {
      const double s = range_sum[c] / double(n);
      for (size_t k = 0; k < layout[c].length; ++k) {
        agg[layout[c].offset + k] += bit_sum[layout[c].offset + k] * s;
      }
    }
  }
  for (double& v : agg) v /= double(n);

  return quantize::inverse_transform(agg, cfg.scheme, rotation_seed, d, layout,
                                     cfg.kashin);
}

std::vector<SweepCell> run_nmse_sweep(const SweepConfig& cfg) {
  SCIONFL_ENFORCE(cfg.trials >= 1, "need at least one trial");
  auto run_cell = [&cfg](size_t cell_idx, size_t n) {
    SweepCell cell;
    cell.scheme = quantize::scheme_name(cfg.pipeline.scheme);
    cell.scales = scales_name(cfg.pipeline.scales);
    cell.conversion = conversion_name(cfg.pipeline.conversion);
    cell.aggregation = aggregation_name(cfg.pipeline.aggregation);
    cell.dim = cfg.dim;
    cell.clients = n;
    cell.trials = cfg.trials;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      Prng rng(mix_key(mix_key(cfg.seed, 0xce11 + cell_idx), t));
      const uint64_t rot_seed = rng.next_u64();
      std::vector<std::vector<double>> updates(n, std::vector<double>(cfg.dim));
      for (auto& u : updates) {
        for (double& v : u) v = rng.next_log_normal();
      }
      auto est = simulate_quantized_mean(updates, cfg.pipeline, rot_seed, rng);
      double e = quantize::nmse(est, updates);
      sum += e;
      sum_sq += e * e;
    }
    cell.nmse_mean = sum / cfg.trials;
    if (cfg.trials > 1) {
      double var = (sum_sq - sum * sum / cfg.trials) / (cfg.trials - 1);
      cell.nmse_stderr = std::sqrt(std::max(0.0, var) / cfg.trials);
    }
    return cell;
  };

  std::vector<SweepCell> cells;
  if (cfg.threads > 1) {
    std::vector<std::future<SweepCell>> futs;
    for (size_t idx = 0; idx < cfg.clients.size(); ++idx) {
      futs.push_back(std::async(std::launch::async, run_cell, idx,
                                cfg.clients[idx]));
    }
    for (auto& f : futs) cells.push_back(f.get());
  } else {
    for (size_t idx = 0; idx < cfg.clients.size(); ++idx) {
      cells.push_back(run_cell(idx, cfg.clients[idx]));
    }
  }
  return cells;
}

}  // namespace scionfl::experiments
