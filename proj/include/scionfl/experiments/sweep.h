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

#include "scionfl/prng.h"
#include "scionfl/quantize.h"

namespace scionfl::experiments {

enum class ScalesMode { kGlobal, kLocal };
enum class Conversion { kExact, kApprox };
enum class Aggregation { kDirect, kSepAgg };

std::string scales_name(ScalesMode m);
std::string conversion_name(Conversion c);
std::string aggregation_name(Aggregation a);
ScalesMode scales_from_name(const std::string& s);
Conversion conversion_from_name(const std::string& s);
Aggregation aggregation_from_name(const std::string& s);

// Plaintext simulation of the secure pipeline: quantize every update,
// replace each payload bit by its (exact or approximate) converted value,
// aggregate in compressed form, undo the transform. Returns the estimated
// client mean.
struct PipelineConfig {
  quantize::Scheme scheme = quantize::Scheme::kSQ;
  ScalesMode scales = ScalesMode::kGlobal;
  Conversion conversion = Conversion::kExact;
  Aggregation aggregation = Aggregation::kDirect;
  int shares = 3;  // q, used by the approximate conversion noise
  size_t min_chunk = 512;
  quantize::KashinConfig kashin;
};

std::vector<double> simulate_quantized_mean(
    const std::vector<std::vector<double>>& updates, const PipelineConfig& cfg,
    uint64_t rotation_seed, Prng& rng);

struct SweepConfig {
  PipelineConfig pipeline;
  size_t dim = 1 << 10;
  std::vector<size_t> clients = {1, 10, 100, 1000};
  int trials = 10;
  uint64_t seed = 1;
  int threads = 1;
};

struct SweepCell {
  std::string scheme;
  std::string scales;
  std::string conversion;
  std::string aggregation;
  size_t dim = 0;
  size_t clients = 0;
  int trials = 0;
  double nmse_mean = 0.0;
  double nmse_stderr = 0.0;
};

// One cell per client count; log-normal(0,1) inputs, NMSE averaged over the
// configured trials.
std::vector<SweepCell> run_nmse_sweep(const SweepConfig& cfg);

}  // namespace scionfl::experiments
