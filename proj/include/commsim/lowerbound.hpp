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
#ifndef COMMSIM_LOWERBOUND_HPP_
#define COMMSIM_LOWERBOUND_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "commsim/algorithms.hpp"
#include "commsim/core.hpp"
#include "commsim/problems.hpp"

namespace commsim {

// Largest 1-based index k with |x_k| > tol; 0 if none.
std::size_t prog(const Vector& x, double tol = 1e-12);

// B^0..B^T of one trial. Each round only the worker i with B = i (mod n)
// can extend the chain, and its fresh coordinate survives compression with
// probability 1/(1+omega).
std::vector<std::size_t> progress_trace(double omega, std::size_t n,
                                        std::size_t T, std::uint64_t seed,
                                        std::size_t trial);

struct ProgressStats {
  double omega = 0.0;
  std::size_t n = 0;
  std::size_t rounds = 0;
  std::size_t trials = 0;
  double p = 0.0;
  std::vector<std::size_t> final_progress;
  std::vector<double> mean_trace;
  double mean = 0.0;
  double se = 0.0;
  double bound = 0.0;  // e T / (1+omega)
  double fraction_below = 0.0;
};

ProgressStats simulate_progress(double omega, std::size_t n, std::size_t T,
                                std::size_t trials, std::uint64_t seed);

double sc_floor(std::size_t prog_value, double mu, double kappa, std::size_t n,
                double delta);
double gc_opt_at_prog(std::size_t k, double lambda, double L, std::size_t n);

double theory_rounds_sc(double omega, double kappa, std::size_t n, double mu,
                        double delta, double eps);
double theory_rounds_gc(double omega, double eps, std::size_t n, double L,
                        double delta);
double savings_ratio(double omega, double kappa, std::size_t n);

struct FloorAuditRow {
  std::size_t round = 0;
  std::size_t prog = 0;
  double subopt = 0.0;
  double floor = 0.0;
  bool violated = false;
};

struct FloorAudit {
  std::vector<FloorAuditRow> rows;
  std::size_t violations = 0;
  // min over checkpoints of subopt / floor.
  double min_ratio = 0.0;
};

// Runs the accelerated loop on a strongly convex hard instance and checks
// f(xhat) - f* >= floor(prog(xhat)) (1 - rel_tol) at every checkpoint.
FloorAudit audit_sc_floor(const HardInstance& inst, const CompressorSpec& spec,
                          const AdianaSchedule& sched, const RunOptions& opts,
                          double rel_tol = 1e-6);

void write_progress_csv(std::ostream& os, const ProgressStats& s);
void write_floor_audit_csv(std::ostream& os, const FloorAudit& a);

}  // namespace commsim

#endif  // COMMSIM_LOWERBOUND_HPP_
