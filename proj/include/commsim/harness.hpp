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
#ifndef COMMSIM_HARNESS_HPP_
#define COMMSIM_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commsim/algorithms.hpp"
#include "commsim/compressors.hpp"
#include "commsim/core.hpp"

namespace commsim {

struct ProblemConfig {
  // constructed | least_squares | libsvm | sc-example1 | gc-example1 |
  // gc-example3 | sc-homogeneous
  std::string type = "constructed";
  double mu = 1.0;
  double L = 1e4;
  std::size_t d = 20;
  std::size_t n = 400;
  std::size_t M = 25;
  double cond = 1e4;
  std::uint64_t seed = 0;
  bool random_rhs = false;
  double delta = 1.0;
  std::string path;
  std::optional<std::size_t> points_per_worker;
  std::optional<std::string> fstar_cache;
};

struct AlgorithmConfig {
  std::string name = "adiana";  // adiana | diana | ef21 | nesterov
  std::optional<std::string> preset;
  std::string schedule = "sc";  // sc | gc | manual
  ManualParams manual;
  double gamma = 0.0;
  std::optional<double> alpha;
  double eta = 0.0;
  double theta = 0.0;
  ShiftInit shift_init = ShiftInit::kZero;
};

struct CompressorConfig {
  // "random_s:1", "natural:shared", ... as in resolve_compressor_hint.
  std::optional<std::string> hint;
  int raw_bits = 64;
};

struct ExperimentConfig {
  ProblemConfig problem;
  AlgorithmConfig algorithm;
  CompressorConfig compressor;
  std::size_t rounds = 1000;
  std::vector<double> eps = {1e-2, 1e-4, 1e-6};
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::string output;
  Execution execution = Execution::kSerial;
  bool track_lyapunov = false;
  std::optional<std::size_t> checkpoint_every;

  void validate() const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);
// COMMSIM_SEED replaces the master seed when set.
void apply_env_overrides(ExperimentConfig& config);

ProblemPtr build_problem(const ProblemConfig& pc);
CompressorSpec build_compressor(const ExperimentConfig& config, std::size_t d);
Trace run_trial(const ExperimentConfig& config, const Problem& problem,
                const CompressorSpec& spec, std::size_t trial);

struct TccResult {
  double eps = 0.0;
  std::optional<std::size_t> rounds;
  std::optional<double> bits;
  bool reached() const { return rounds.has_value(); }
};

// First checkpoint where the trial-averaged suboptimality is <= eps. A
// trial that stopped early (divergence) counts as +inf from then on.
TccResult compute_tcc(std::span<const Trace> ensemble, double eps);

struct SummaryRow {
  std::size_t round = 0;
  double bits = 0.0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single trial
  std::size_t count = 0;
};

std::vector<SummaryRow> summarize(std::span<const Trace> ensemble);

inline constexpr const char* kSummaryHeader =
    "algorithm,compressor,omega,n,d,seed,round,bits_cum,subopt_mean,subopt_std,"
    "trials";
void write_summary_csv(std::ostream& os, std::span<const Trace> ensemble);

struct ExperimentResult {
  ProblemPtr problem;
  CompressorSpec compressor;
  std::vector<Trace> traces;
  std::vector<SummaryRow> summary;
  std::vector<TccResult> tcc;
  bool partial = false;
};

// Writes <output>.raw.csv, <output>.summary.csv and <output>.meta.txt when
// config.output is set.
ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config,
                                ProblemPtr problem);

struct GridSpec {
  // Parameter name -> candidate values, evaluated as a full product.
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  double budget_fraction = 0.2;
};

// [grid] name = v1,v2,... or name = log:lo:hi:count; [tune] budget_fraction.
GridSpec parse_grid(std::istream& is);
GridSpec load_grid(const std::string& path);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct GridPoint {
  std::vector<std::pair<std::string, double>> params;
  double final_subopt = 0.0;
  bool diverged = false;
};

struct TuneResult {
  GridPoint best;
  std::vector<GridPoint> evaluated;
};

// Sets the named parameters as constants on a copy of the config.
ExperimentConfig with_params(
    const ExperimentConfig& config,
    const std::vector<std::pair<std::string, double>>& params);

TuneResult tune_grid(const ExperimentConfig& config, const GridSpec& grid);
TuneResult tune_grid(const ExperimentConfig& config, const GridSpec& grid,
                     ProblemPtr problem);

}  // namespace commsim

#endif  // COMMSIM_HARNESS_HPP_
