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

#include <cmath>
#include <iostream>

#include <CLI11.hpp>

#include "scionfl/chunking.h"
#include "scionfl/experiments/defense_run.h"
#include "scionfl/experiments/fl.h"
#include "scionfl/experiments/report.h"
#include "scionfl/experiments/sweep.h"
#include "scionfl/mpc/cost.h"

namespace {

using namespace scionfl;
using experiments::Table;

struct CommonOpts {
  std::string scheme = "sq";
  std::string scales = "global";
  std::string conversion = "exact";
  std::string approach = "direct";
  size_t dim = 1 << 10;
  std::vector<size_t> clients = {1, 10, 100, 1000};
  size_t population = 50;
  int trials = 10;
  uint64_t seed = 1;
  int shares = 3;
  std::string out;
  std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "output file (stdout when omitted)");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Table& table, const CommonOpts& o) {
  if (o.out.empty()) {
    std::cout << (o.format == "csv" ? table.to_csv() : table.to_json());
  } else {
    table.write(o.out, o.format);
  }
}

experiments::PipelineConfig pipeline_of(const CommonOpts& o) {
  experiments::PipelineConfig p;
  p.scheme = quantize::scheme_from_name(o.scheme);
  p.scales = experiments::scales_from_name(o.scales);
  p.conversion = experiments::conversion_from_name(o.conversion);
  p.aggregation = (o.approach == "3" || o.approach == "sepagg")
                      ? experiments::Aggregation::kSepAgg
                      : experiments::Aggregation::kDirect;
  p.shares = o.shares;
  return p;
}

int cmd_nmse(const CommonOpts& o) {
  experiments::SweepConfig cfg;
  cfg.pipeline = pipeline_of(o);
  cfg.dim = o.dim;
  cfg.clients = o.clients;
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  auto cells = experiments::run_nmse_sweep(cfg);
  Table t({"scheme", "scales", "mode", "d", "n", "trials", "nmse_mean",
           "nmse_stderr"});
  for (const auto& c : cells) {
    t.add_row({c.scheme, c.scales, c.conversion + "/" + c.aggregation,
               std::to_string(c.dim), std::to_string(c.clients),
               std::to_string(c.trials), Table::format_number(c.nmse_mean),
               Table::format_number(c.nmse_stderr)});
  }
  emit(t, o);
  return 0;
}

int cmd_train(const CommonOpts& o, const experiments::FlTask& task,
              double momentum) {
  experiments::TrainConfig cfg;
  cfg.pipeline = pipeline_of(o);
  cfg.seed = o.seed;
  cfg.momentum = momentum;
  cfg.quantize_updates = o.scheme != "none";
  auto result = experiments::run_fl_training(task, cfg);
  Table t({"round", "accuracy"});
  for (size_t r = 0; r < result.accuracy.size(); ++r) {
    t.add_row({std::to_string(r), Table::format_number(result.accuracy[r])});
  }
  emit(t, o);
  if (result.diverged) {
    std::cerr << "warning: training diverged (NaN loss)\n";
  }
  return 0;
}

int cmd_defense(const CommonOpts& o, const experiments::FlTask& task,
                size_t malicious, double mu, size_t psi, double momentum,
                const std::string& perturbation) {
  experiments::DefenseExperimentConfig cfg;
  cfg.task = task;
  cfg.train.pipeline = pipeline_of(o);
  cfg.train.seed = o.seed;
  cfg.train.momentum = momentum;
  cfg.num_malicious = malicious;
  cfg.defense.mu_threshold = mu;
  if (psi > 0) cfg.defense.filter_count = psi;
  cfg.defense.momentum = momentum;
  cfg.attack.perturbation = robust::perturbation_from_name(perturbation);
  auto result = experiments::run_defense_experiment(cfg);
  Table t({"round", "baseline_acc", "attacked_acc", "defended_acc",
           "attackers_selected", "attackers_excluded"});
  for (size_t r = 0; r < result.baseline_accuracy.size(); ++r) {
    t.add_row({std::to_string(r),
               Table::format_number(result.baseline_accuracy[r]),
               Table::format_number(result.attacked_accuracy[r]),
               Table::format_number(result.defended_accuracy[r]),
               std::to_string(result.selected_attackers[r]),
               std::to_string(result.excluded_attackers[r])});
  }
  emit(t, o);
  std::cerr << "attacker exclusion rate: "
            << Table::format_number(result.exclusion_rate()) << "\n";
  return 0;
}

int cmd_cost(const CommonOpts& o, const std::string& arch_name) {
  Table t({"arch", "scheme", "approach", "mode", "n", "offline_mib",
           "online_mib", "symbolic"});
  const auto& archs = quantize::reference_architectures();
  for (const auto& arch : archs) {
    if (!arch_name.empty() && arch.name != arch_name) continue;
    for (auto scheme : {quantize::Scheme::kHSQ, quantize::Scheme::kKSQ}) {
      uint64_t payload = quantize::arch_quantized_bits(arch, scheme) -
                         64 * (scheme == quantize::Scheme::kKSQ
                                   ? arch.kashin_chunk_sizes.size()
                                   : arch.chunk_sizes.size());
      for (auto approach : {mpc::Approach::kOne, mpc::Approach::kTwo,
                            mpc::Approach::kThree}) {
        for (auto mode :
             {bitconv::ConvMode::kExact, bitconv::ConvMode::kApprox}) {
          for (size_t n : o.clients) {
            auto cost = mpc::cost_report(approach, mode, n, payload);
            t.add_row({arch.name, quantize::scheme_name(scheme),
                       mpc::approach_name(approach),
                       mode == bitconv::ConvMode::kExact ? "exact" : "approx",
                       std::to_string(n),
                       Table::format_number(cost.offline_mib()),
                       Table::format_number(cost.online_mib()),
                       mpc::symbolic_cost(approach, n).to_string()});
          }
        }
      }
    }
  }
  emit(t, o);
  return 0;
}

int cmd_selfcheck() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  };

  // Exact conversion equals XOR for q up to 8.
  {
    bool ok = true;
    for (int q = 1; q <= 8 && ok; ++q) {
      for (uint32_t a = 0; a < (1u << q); ++a) {
        ring::BooleanShares s;
        uint8_t x = 0;
        for (int i = 0; i < q; ++i) {
          uint8_t bit = (a >> i) & 1;
          s.shares.push_back(bit);
          x ^= bit;
        }
        if (bitconv::exact_bit_to_arith(s) != x) {
          ok = false;
          break;
        }
      }
    }
    check(ok, "exact bit conversion equals XOR");
  }
  // Approximate conversion is unbiased over all sharings.
  {
    bool ok = true;
    for (int q = 2; q <= 8 && ok; ++q) {
      for (int b = 0; b <= 1; ++b) {
        double sum = 0.0;
        int count = 0;
        for (uint32_t a = 0; a < (1u << q); ++a) {
          ring::BooleanShares s;
          uint8_t x = 0;
          for (int i = 0; i < q; ++i) {
            uint8_t bit = (a >> i) & 1;
            s.shares.push_back(bit);
            x ^= bit;
          }
          if (x != b) continue;
          sum += bitconv::approx_bit_to_arith_value(s);
          ++count;
        }
        if (sum / count != double(b)) ok = false;
      }
    }
    check(ok, "approximate conversion preserves the expectation");
  }
  // Published bit budgets.
  {
    bool ok = true;
    for (const auto& arch : quantize::reference_architectures()) {
      ok = ok && quantize::arch_quantized_bits(arch, quantize::Scheme::kSQ) ==
                     arch.params;
    }
    ok = ok && quantize::quantized_bits(quantize::Scheme::kKSQ, 61706) == 73024;
    check(ok, "reference bit budgets");
  }
  // SepAgg equals the direct pipeline at n = 1.
  {
    experiments::SweepConfig cfg;
    cfg.pipeline.scheme = quantize::Scheme::kSQ;
    cfg.pipeline.scales = experiments::ScalesMode::kLocal;
    cfg.clients = {1};
    cfg.trials = 2;
    cfg.dim = 256;
    auto direct = experiments::run_nmse_sweep(cfg);
    cfg.pipeline.aggregation = experiments::Aggregation::kSepAgg;
    auto sepagg = experiments::run_nmse_sweep(cfg);
    check(direct[0].nmse_mean == sepagg[0].nmse_mean,
          "sepagg equals direct aggregation at n=1");
  }
  std::cout << (failures == 0 ? "self-check passed\n" : "self-check FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secure quantized aggregation experiments"};
  app.set_config("--config");
  app.require_subcommand(1);

  CommonOpts o;
  experiments::FlTask task;
  double momentum = 0.9;
  double mu = 3.0;
  size_t psi = 0;
  size_t malicious = 10;
  std::string perturbation = "inverse-unit";
  std::string arch;
  int rounds = 60;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scheme", o.scheme, "sq, hsq, ksq (train also: none)");
    cmd->add_option("--scales", o.scales, "global or local");
    cmd->add_option("--conversion", o.conversion, "exact or approx");
    cmd->add_option("--approach", o.approach, "direct, sepagg/3");
    cmd->add_option("--dim", o.dim, "vector dimension");
    cmd->add_option("--clients", o.clients, "clients per round (list)")
        ->delimiter(',');
    cmd->add_option("--population", o.population, "client population N");
    cmd->add_option("--trials", o.trials, "trials per cell");
    cmd->add_option("--seed", o.seed, "PRNG seed");
    cmd->add_option("--shares", o.shares, "Boolean share count q");
    add_output_flags(cmd, o);
  };

  auto* nmse = app.add_subcommand("nmse", "NMSE sweep over client counts");
  add_common(nmse);

  auto* train = app.add_subcommand("train", "federated training run");
  add_common(train);
  train->add_option("--rounds", rounds, "training rounds");
  train->add_option("--momentum", momentum, "server momentum");

  auto* defense =
      app.add_subcommand("defense", "attack/defense experiment (three arms)");
  add_common(defense);
  defense->add_option("--rounds", rounds, "training rounds");
  defense->add_option("--momentum", momentum, "server momentum");
  defense->add_option("--malicious", malicious, "number of malicious clients");
  defense->add_option("--mu", mu, "norm-scaling threshold");
  defense->add_option("--psi", psi, "updates filtered per round (0 = 20%)");
  defense->add_option("--perturbation", perturbation,
                      "inverse-unit, inverse-std, inverse-sign");

  auto* cost = app.add_subcommand("cost", "communication-cost report");
  add_common(cost);
  cost->add_option("--arch", arch, "restrict to one architecture");

  app.add_subcommand("selfcheck", "run quick invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("nmse")) return cmd_nmse(o);
    if (app.got_subcommand("train") || app.got_subcommand("defense")) {
      task.population = o.population;
      task.clients_per_round = o.clients.empty() ? 10 : o.clients.front();
      task.rounds = rounds;
      if (app.got_subcommand("train")) return cmd_train(o, task, momentum);
      return cmd_defense(o, task, malicious, mu, psi, momentum, perturbation);
    }
    if (app.got_subcommand("cost")) return cmd_cost(o, arch);
    if (app.got_subcommand("selfcheck")) return cmd_selfcheck();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
