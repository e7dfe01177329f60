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
#include "commsim/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "commsim/random.hpp"

namespace commsim {

std::size_t prog(const Vector& x, double tol) {
  for (Eigen::Index j = x.size(); j > 0; --j) {
    if (std::abs(x[j - 1]) > tol) return static_cast<std::size_t>(j);
  }
  return 0;
}

std::vector<std::size_t> progress_trace(double omega, std::size_t n,
                                        std::size_t T, std::uint64_t seed,
                                        std::size_t trial) {
  if (omega < 0.0 || n == 0) throw ConfigError("progress needs omega >= 0, n >= 1");
  const double p = 1.0 / (1.0 + omega);
  std::vector<std::size_t> B(T + 1, 0);
  for (std::size_t t = 1; t <= T; ++t) {
    const std::size_t active = B[t - 1] % n;
    KeyedStream rng(seed, StreamDomain::kProgress, trial, t, active);
    B[t] = B[t - 1] + (rng.bernoulli(p) ? 1 : 0);
  }
  return B;
}

ProgressStats simulate_progress(double omega, std::size_t n, std::size_t T,
                                std::size_t trials, std::uint64_t seed) {
  if (static_cast<double>(T) < std::ceil(1.0 + omega)) {
    throw ConfigError("simulate_progress needs T >= ceil(1+omega)");
  }
  if (trials == 0) throw ConfigError("simulate_progress needs trials >= 1");
  ProgressStats s;
  s.omega = omega;
  s.n = n;
  s.rounds = T;
  s.trials = trials;
  s.p = 1.0 / (1.0 + omega);
  s.bound = std::numbers::e * static_cast<double>(T) / (1.0 + omega);
  s.mean_trace.assign(T + 1, 0.0);
  double m1 = 0.0, m2 = 0.0;
  std::size_t below = 0;
  for (std::size_t r = 0; r < trials; ++r) {
    const auto B = progress_trace(omega, n, T, seed, r);
    for (std::size_t t = 0; t <= T; ++t) {
      s.mean_trace[t] += static_cast<double>(B[t]);
    }
    const double b = static_cast<double>(B[T]);
    s.final_progress.push_back(B[T]);
    m1 += b;
    m2 += b * b;
    if (b <= s.bound) ++below;
  }
  const double K = static_cast<double>(trials);
  for (auto& v : s.mean_trace) v /= K;
  s.mean = m1 / K;
  const double var = trials > 1 ? std::max(0.0, (m2 - K * s.mean * s.mean) / (K - 1.0)) : 0.0;
  s.se = std::sqrt(var / K);
  s.fraction_below = static_cast<double>(below) / K;
  return s;
}

double sc_floor(std::size_t prog_value, double mu, double kappa, std::size_t n,
                double delta) {
  if (!(kappa >= 1.0) || n == 0) throw ConfigError("sc_floor needs kappa >= 1, n >= 1");
  const double q = chain_decay_ratio(kappa, n);
  if (prog_value == 0) return 0.5 * mu * delta;
  return 0.5 * mu * std::pow(q, 2.0 * static_cast<double>(prog_value)) * delta;
}

double gc_opt_at_prog(std::size_t k, double lambda, double L, std::size_t n) {
  const double kk = static_cast<double>(k);
  return -lambda * lambda * L * kk / (4.0 * static_cast<double>(n) * (kk + 1.0));
}

double theory_rounds_sc(double omega, double kappa, std::size_t n, double mu,
                        double delta, double eps) {
  const double sn = std::sqrt(static_cast<double>(n));
  return (omega + (1.0 + omega / sn) * std::sqrt(kappa)) * std::log(mu * delta / eps);
}

double theory_rounds_gc(double omega, double eps, std::size_t n, double L,
                        double delta) {
  const double sn = std::sqrt(static_cast<double>(n));
  return omega * std::log(L * delta / eps) +
         (1.0 + omega / sn) * std::sqrt(L * delta / eps);
}

double savings_ratio(double omega, double kappa, std::size_t n) {
  if (!(kappa >= 1.0) || n == 0) throw ConfigError("savings_ratio needs kappa >= 1");
  const double sk = std::sqrt(kappa);
  const double sn = std::sqrt(static_cast<double>(n));
  return (omega + (1.0 + omega / sn) * sk) / ((1.0 + omega) * sk);
}

FloorAudit audit_sc_floor(const HardInstance& inst, const CompressorSpec& spec,
                          const AdianaSchedule& sched, const RunOptions& opts,
                          double rel_tol) {
  const Problem& p = *inst.problem;
  const double kappa = p.condition_number();
  const double mu = p.strong_convexity();
  const double delta = p.delta();
  const std::size_t chain_n =
      inst.family == HardFamily::kScHomogeneous ? 1 : p.workers();
  FloorAudit audit;
  audit.min_ratio = std::numeric_limits<double>::infinity();
  run_adiana(p, spec, sched, opts,
             [&](std::size_t k, const AdianaState&, const Vector& xhat) {
               FloorAuditRow row;
               row.round = k;
               row.prog = prog(xhat);
               row.subopt = p.gap(xhat);
               row.floor = sc_floor(row.prog, mu, kappa, chain_n, delta);
               row.violated = row.subopt < row.floor * (1.0 - rel_tol);
               if (row.violated) ++audit.violations;
               if (row.floor > 0.0) {
                 audit.min_ratio = std::min(audit.min_ratio, row.subopt / row.floor);
               }
               audit.rows.push_back(row);
             });
  return audit;
}

void write_progress_csv(std::ostream& os, const ProgressStats& s) {
  os << "omega,n,rounds,trials,p,mean_BT,se_BT,bound,fraction_below_bound\n";
  os << format_double(s.omega) << ',' << s.n << ',' << s.rounds << ','
     << s.trials << ',' << format_double(s.p) << ',' << format_double(s.mean)
     << ',' << format_double(s.se) << ',' << format_double(s.bound) << ','
     << format_double(s.fraction_below) << '\n';
}

void write_floor_audit_csv(std::ostream& os, const FloorAudit& a) {
  os << "round,prog,subopt,floor,violated\n";
  for (const auto& r : a.rows) {
    os << r.round << ',' << r.prog << ',' << format_double(r.subopt) << ','
       << format_double(r.floor) << ',' << (r.violated ? 1 : 0) << '\n';
  }
}

}  // namespace commsim
