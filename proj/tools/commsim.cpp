// Copyright 2026 The commsim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================
// commsim command line: run, sweep, lowerbound, bits, tcc.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commsim/compressors.hpp"
#include "commsim/harness.hpp"
#include "commsim/lowerbound.hpp"
#include "commsim/presets.hpp"
#include "commsim/problems.hpp"
#include "commsim/random.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

using namespace commsim;

void print_tcc(const std::vector<TccResult>& tcc) {
  for (const auto& t : tcc) {
    if (t.reached()) {
      fmt::print("eps={} rounds={} bits={}\n", format_double(t.eps), *t.rounds,
                 format_double(*t.bits));
    } else {
      fmt::print("eps={} unreached\n", format_double(t.eps));
    }
  }
}

int cmd_run(const std::string& path) {
  ExperimentConfig cfg = load_config(path);
  apply_env_overrides(cfg);
  const ExperimentResult res = run_experiment(cfg);
  fmt::print("problem={} algorithm={} compressor={} omega={} trials={}\n",
             res.problem->name(), cfg.algorithm.name, res.compressor.id(),
             format_double(res.compressor.omega()), cfg.trials);
  print_tcc(res.tcc);
  if (res.partial) {
    std::cerr << "warning: at least one trial diverged\n";
    return kExitDiverged;
  }
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& grid_path,
              bool run_best) {
  ExperimentConfig cfg = load_config(path);
  apply_env_overrides(cfg);
  const GridSpec grid = load_grid(grid_path);
  ProblemPtr problem = build_problem(cfg.problem);
  const TuneResult tr = tune_grid(cfg, grid, problem);
  for (const auto& p : tr.evaluated) {
    std::string desc;
    for (const auto& [k, v] : p.params) desc += fmt::format("{}={} ", k, format_double(v));
    fmt::print("{}final_subopt={}{}\n", desc, format_double(p.final_subopt),
               p.diverged ? " diverged" : "");
  }
  std::string best;
  for (const auto& [k, v] : tr.best.params) best += fmt::format(" {}={}", k, format_double(v));
  fmt::print("best:{}\n", best);
  if (!run_best) return 0;
  const ExperimentResult res = run_experiment(with_params(cfg, tr.best.params), problem);
  print_tcc(res.tcc);
  return res.partial ? kExitDiverged : 0;
}

struct LowerboundArgs {
  double omega = 9.0;
  std::size_t n = 8;
  std::size_t rounds = 1000;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::string audit;
  double kappa = 1e4;
  std::size_t d = 200;
  std::size_t s = 2;
  std::size_t audit_rounds = 2000;
};

int cmd_lowerbound(const LowerboundArgs& a) {
  const ProgressStats st = simulate_progress(a.omega, a.n, a.rounds, a.trials, a.seed);
  write_progress_csv(std::cout, st);
  if (a.audit.empty()) return 0;

  const HardInstance inst = gen_zero_chain_sc(a.kappa, 1.0, a.n, a.d);
  const CompressorSpec spec = CompressorSpec::random_s(a.d, a.s);
  const auto sched = AdianaSchedule::strongly_convex(
      inst.problem->smoothness(), inst.problem->strong_convexity(), a.n, spec.omega());
  RunOptions opts;
  opts.rounds = a.audit_rounds;
  opts.seed = a.seed;
  const FloorAudit audit = audit_sc_floor(inst, spec, sched, opts);
  std::ofstream out(a.audit, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + a.audit + "'");
  write_floor_audit_csv(out, audit);
  std::cerr << fmt::format("floor audit: {} checkpoints, {} violations, min ratio {}\n",
                           audit.rows.size(), audit.violations,
                           format_double(audit.min_ratio));
  return 0;
}

int cmd_bits(const std::string& kind, std::size_t d, std::size_t s,
             const std::string& randomness, int raw_bits) {
  std::string hint = kind;
  const CompressorKind k = parse_compressor_kind(kind);
  if (k == CompressorKind::kRandomS || k == CompressorKind::kUnscaledRandomS ||
      (k == CompressorKind::kQuantize && s > 0)) {
    hint += ":" + std::to_string(s);
  }
  hint += ":" + randomness;
  CompressorSpec spec = resolve_compressor_hint(hint, d);
  spec.raw_bits = raw_bits;
  spec.validate();
  const double floor = min_bits_lower_bound(d, spec.omega(), raw_bits);
  fmt::print("compressor={} d={} omega={}\n", spec.id(), d, format_double(spec.omega()));
  if (auto b = spec.fixed_bits()) {
    fmt::print("bits_per_round={}\n", format_double(*b));
  } else {
    // Message-dependent cost: report the mean over Gaussian messages.
    const Compressor c(spec, 0);
    Vector x(static_cast<Eigen::Index>(d)), out;
    double sum = 0.0;
    constexpr std::size_t kProbes = 1000;
    for (std::size_t r = 0; r < kProbes; ++r) {
      KeyedStream g(0, StreamDomain::kProbe, r, 0, 0);
      for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = g.normal();
      sum += c.compress(0, r, 0, x, out);
    }
    fmt::print("bits_per_round_mean={} (gaussian messages, {} probes)\n",
               format_double(sum / kProbes), kProbes);
  }
  fmt::print("min_bits_lower_bound={}\n", format_double(floor));
  return 0;
}

int cmd_tcc(const std::string& path, const std::vector<double>& eps) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  const std::vector<Trace> traces = read_trace_csv(in);
  if (traces.empty()) throw ConfigError("no traces in '" + path + "'");
  std::vector<TccResult> out;
  for (double e : eps) out.push_back(compute_tcc(traces, e));
  print_tcc(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed distributed optimization simulator"};
  app.require_subcommand(1);

  std::string config, grid, csv;
  bool run_best = false;

  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "Grid-tune the tunable parameters of a config");
  sweep->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", grid, "Grid file")->required()->check(CLI::ExistingFile);
  sweep->add_flag("--run-best", run_best, "Run the full horizon at the selected point");

  LowerboundArgs lb;
  auto* lower = app.add_subcommand("lowerbound", "Progress simulation and floor audit");
  lower->add_option("--omega", lb.omega)->required();
  lower->add_option("--n", lb.n)->required();
  lower->add_option("--rounds", lb.rounds)->required();
  lower->add_option("--trials", lb.trials)->required();
  lower->add_option("--seed", lb.seed);
  lower->add_option("--audit", lb.audit, "Write a floor audit CSV to this path");
  lower->add_option("--kappa", lb.kappa, "Audit instance condition number");
  lower->add_option("--d", lb.d, "Audit instance dimension");
  lower->add_option("--s", lb.s, "Audit random-s coordinates");
  lower->add_option("--audit-rounds", lb.audit_rounds);

  std::string kind, randomness = "independent";
  std::size_t d = 20, s = 0;
  int raw_bits = 64;
  auto* bits = app.add_subcommand("bits", "Per-round cost and its lower bound");
  bits->add_option("--compressor", kind)->required();
  bits->add_option("--d", d)->required();
  bits->add_option("--s", s, "Kept coordinates, or quantization levels (0: ceil(sqrt(d)))");
  bits->add_option("--randomness", randomness);
  bits->add_option("--raw-bits", raw_bits);

  std::vector<double> eps;
  auto* tcc = app.add_subcommand("tcc", "Total communication cost of a raw trace CSV");
  tcc->add_option("csv", csv)->required()->check(CLI::ExistingFile);
  tcc->add_option("--eps", eps)->required();

  auto* list = app.add_subcommand("presets", "List fixture presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config);
    if (*sweep) return cmd_sweep(config, grid, run_best);
    if (*lower) return cmd_lowerbound(lb);
    if (*bits) return cmd_bits(kind, d, s, randomness, raw_bits);
    if (*tcc) return cmd_tcc(csv, eps);
    if (*list) {
      for (const auto& p : presets()) {
        fmt::print("{} {} {} {}\n", p.name, p.algorithm, p.problem, p.compressor);
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
