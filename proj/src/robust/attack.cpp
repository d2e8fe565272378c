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

#include "scionfl/robust/attack.h"

#include <cmath>

#include "scionfl/base.h"

namespace scionfl::robust {
namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<double> mean_of(const std::vector<std::vector<double>>& xs) {
  std::vector<double> m(xs[0].size(), 0.0);
  for (const auto& x : xs) {
    for (size_t i = 0; i < m.size(); ++i) m[i] += x[i];
  }
  for (double& v : m) v /= static_cast<double>(xs.size());
  return m;
}

}  // namespace

Perturbation perturbation_from_name(const std::string& name) {
  if (name == "inverse-unit" || name == "unit") return Perturbation::kInverseUnit;
  if (name == "inverse-std" || name == "std") return Perturbation::kInverseStd;
  if (name == "inverse-sign" || name == "sign")
    return Perturbation::kInverseSign;
  SCIONFL_ENFORCE(false, "unknown perturbation: ", name);
}

std::vector<double> perturbation_vector(
    const std::vector<std::vector<double>>& benign, Perturbation kind) {
  auto mean = mean_of(benign);
  const size_t d = mean.size();
  std::vector<double> p(d, 0.0);
  switch (kind) {
    case Perturbation::kInverseUnit: {
      double norm = 0.0;
      for (double v : mean) norm += v * v;
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (size_t i = 0; i < d; ++i) p[i] = -mean[i] / norm;
      }
      break;
    }
    case Perturbation::kInverseStd: {
      for (size_t i = 0; i < d; ++i) {
        double var = 0.0;
        for (const auto& g : benign) {
          double diff = g[i] - mean[i];
          var += diff * diff;
        }
        p[i] = -std::sqrt(var / static_cast<double>(benign.size()));
      }
      break;
    }
    case Perturbation::kInverseSign: {
      for (size_t i = 0; i < d; ++i) {
        p[i] = mean[i] > 0.0 ? -1.0 : (mean[i] < 0.0 ? 1.0 : 0.0);
      }
      break;
    }
  }
  return p;
}

MinMaxResult minmax_attack(const std::vector<std::vector<double>>& benign,
                           const AttackConfig& cfg) {
  SCIONFL_ENFORCE(benign.size() >= 2, "attack needs at least two gradients");
  const size_t d = benign[0].size();
  for (const auto& g : benign) {
    SCIONFL_ENFORCE(g.size() == d, "gradient dimension mismatch");
  }

  auto mean = mean_of(benign);
  auto p = perturbation_vector(benign, cfg.perturbation);
  double pnorm = 0.0;
  for (double v : p) pnorm += v * v;
  SCIONFL_ENFORCE(pnorm > 0.0, "perturbation vector is zero");

  double bound = 0.0;
  for (size_t i = 0; i < benign.size(); ++i) {
    for (size_t j = i + 1; j < benign.size(); ++j) {
      bound = std::max(bound, dist(benign[i], benign[j]));
    }
  }

  std::vector<double> candidate(d);
  auto feasible = [&](double gamma) {
    for (size_t i = 0; i < d; ++i) candidate[i] = mean[i] + gamma * p[i];
    double worst = 0.0;
    for (const auto& g : benign) worst = std::max(worst, dist(candidate, g));
    return worst <= bound;
  };

  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (feasible(hi) && doublings < 200) {
    lo = hi;
    hi *= 2.0;
    ++doublings;
  }
  SCIONFL_ENFORCE(doublings < 200, "constraint never became binding");
  for (int it = 0; it < cfg.bisection_steps && hi - lo > cfg.tolerance * 0.5;
       ++it) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  MinMaxResult out;
  out.gamma = lo;
  out.gradient.resize(d);
  for (size_t i = 0; i < d; ++i) out.gradient[i] = mean[i] + lo * p[i];
  return out;
}

}  // namespace scionfl::robust
