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
#include <cmath>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "commsim/lowerbound.hpp"
#include "commsim/random.hpp"

using namespace commsim;

TEST_CASE("prog") {
  CHECK(prog(Vector::Zero(4)) == 0);
  CHECK(prog((Vector(4) << 1, 0, 3, 0).finished()) == 3);
  CHECK(prog((Vector(2) << 1e-15, 0).finished()) == 0);
  CHECK(prog((Vector(2) << 1e-15, 0).finished(), 0.0) == 1);
}

TEST_CASE("progress chain") {
  const auto B = progress_trace(0.0, 5, 50, 1, 0);
  for (std::size_t t = 0; t <= 50; ++t) CHECK(B[t] == t);

  const auto C = progress_trace(19.0, 8, 500, 3, 2);
  CHECK(C[0] == 0);
  for (std::size_t t = 1; t <= 500; ++t) {
    CHECK(C[t] >= C[t - 1]);
    CHECK(C[t] <= C[t - 1] + 1);
  }
  CHECK(progress_trace(19.0, 8, 500, 3, 2) == C);
  CHECK_THROWS_AS(simulate_progress(19.0, 8, 10, 5, 0), ConfigError);
}

TEST_CASE("progress matches the binomial model") {
  for (double omega : {1.0, 9.0, 19.0}) {
    const std::size_t T = 1000;
    const ProgressStats s = simulate_progress(omega, 8, T, 1000, 11);
    const double p = 1.0 / (1.0 + omega);
    // B^0 = 0 and every round is one Bernoulli(p) step: B^T ~ Binomial(T, p).
    CHECK(std::abs(s.mean - T * p) <= 3.0 * s.se);
    CHECK(s.se == doctest::Approx(std::sqrt(T * p * (1 - p) / 1000.0)).epsilon(0.1));
    CHECK(s.fraction_below >= 1.0 - std::exp(-1.0));
    CHECK(s.bound == doctest::Approx(std::numbers::e * T * p));
    CHECK(s.mean_trace.size() == T + 1);
    CHECK(s.mean_trace[T] == doctest::Approx(s.mean));
  }
  const ProgressStats s = simulate_progress(19.0, 8, 1000, 1000, 0);
  CHECK(s.mean == doctest::Approx(50.0).epsilon(0.1));
}

TEST_CASE("strongly convex floor") {
  CHECK(sc_floor(0, 2.0, 1e4, 400, 3.0) == 3.0);
  CHECK(sc_floor(3, 1.0, 1.0, 4, 1.0) == 0.0);
  const double q = 1.0 - 2.0 / (1.0 + std::sqrt(1.0 + 2.0 * (1e4 - 1.0) / 400.0));
  CHECK(sc_floor(10, 1.0, 1e4, 400, 1.0) == doctest::Approx(0.5 * std::pow(q, 20)).epsilon(1e-12));
  CHECK(sc_floor(10, 1.0, 1e4, 400, 1.0) == doctest::Approx(1.76e-3).epsilon(5e-3));
  for (std::size_t k = 1; k < 30; ++k) {
    CHECK(sc_floor(k, 1.0, 1e4, 8, 1.0) < sc_floor(k - 1, 1.0, 1e4, 8, 1.0));
  }
}

TEST_CASE("generally convex constrained optimum") {
  CHECK(gc_opt_at_prog(0, 1.0, 1.0, 1) == 0.0);
  CHECK(gc_opt_at_prog(2, 1.0, 1.0, 1) == doctest::Approx(-1.0 / 6.0));
  const double lam = std::sqrt(0.75);
  CHECK(gc_opt_at_prog(10, lam, 2.0, 3) == doctest::Approx(-0.75 * 2.0 * 10 / (12.0 * 11.0)));

  const HardInstance inst = gen_zero_chain_gc(1.0, 1, 4, 1.0);
  CHECK(inst.problem->optimal_value() ==
        doctest::Approx(gc_opt_at_prog(4, inst.lambda, 1.0, 1)).epsilon(1e-10));
}

TEST_CASE("theory evaluators") {
  const double kappa = 1e4, eps = 1e-6;
  CHECK(theory_rounds_sc(0.0, kappa, 400, 1.0, 1.0, eps) ==
        doctest::Approx(100.0 * std::log(1e6)));
  CHECK(theory_rounds_sc(3.0, kappa, 1, 1.0, 1.0, eps) ==
        doctest::Approx((3.0 + 4.0 * 100.0) * std::log(1e6)));
  CHECK(theory_rounds_gc(0.0, eps, 10, 1.0, 1.0) == doctest::Approx(1000.0));
  CHECK(theory_rounds_gc(2.0, 1.0, 4, 1.0, 1.0) == doctest::Approx(2.0));
  CHECK(theory_rounds_sc(19.0, kappa, 400, 1.0, 1.0, eps) / theory_rounds_sc(19.0, kappa, 1, 1.0, 1.0, eps) ==
        doctest::Approx(savings_ratio(19.0, kappa, 400) * 20.0 * 100.0 / (19.0 + 20.0 * 100.0)));
}

TEST_CASE("savings ratio") {
  CHECK(savings_ratio(19.0, 1e4, 400) == doctest::Approx(0.107).epsilon(1e-12));
  CHECK(savings_ratio(0.0, 1e4, 400) == 1.0);
  CHECK(savings_ratio(1e9, 1e4, 400) == doctest::Approx(0.01 + 0.05).epsilon(1e-6));
  // omega = sqrt(n): the ratio stays bounded away from zero.
  CHECK(savings_ratio(20.0, 1e4, 400) > 0.09);
  KeyedStream g(3, StreamDomain::kProbe);
  for (int t = 0; t < 500; ++t) {
    const double omega = std::exp(8.0 * g.uniform() - 4.0);
    const double kappa = std::exp(12.0 * g.uniform());
    double prev = savings_ratio(omega, kappa, 1);
    // n = 1 gives 1 + omega/((1+omega) sqrt(kappa)), below 2 but above 1.
    CHECK(prev == doctest::Approx(1.0 + omega / ((1.0 + omega) * std::sqrt(kappa))));
    CHECK(prev < 2.0);
    for (std::size_t n = 2; n < 2000; n *= 3) {
      const double r = savings_ratio(omega, kappa, n);
      CHECK(r <= prev * (1 + 1e-12));
      CHECK(r <= 1.0 + omega);
      prev = r;
    }
  }
}

TEST_CASE("floor holds along an accelerated run") {
  const HardInstance inst = gen_zero_chain_sc(1e3, 1.0, 4, 80);
  const auto spec = CompressorSpec::random_s(80, 4);
  const auto sched = AdianaSchedule::strongly_convex(1e3, 1.0, 4, spec.omega());
  RunOptions o;
  o.rounds = 400;
  o.seed = 2;
  const FloorAudit a = audit_sc_floor(inst, spec, sched, o);
  CHECK(a.violations == 0);
  CHECK(a.rows.size() == 401);
  CHECK(a.min_ratio >= 1.0);
  CHECK(a.rows.front().prog == 0);

  // A manual schedule with large steps still respects the floor.
  ManualParams m;
  m.eta = Rule::constant(1.0 / 2e3);
  m.theta1 = Rule::constant(0.1);
  m.theta2 = Rule::constant(0.2);
  m.p = Rule::constant(0.5);
  const FloorAudit b = audit_sc_floor(inst, spec, AdianaSchedule::manual(m, 1.0, spec.omega()), o);
  CHECK(b.violations == 0);
}

TEST_CASE("zero-chain gradients extend prog by at most one") {
  const HardInstance inst = gen_zero_chain_sc(1e4, 1.0, 8, 60);
  KeyedStream g(8, StreamDomain::kProbe);
  Vector grad;
  for (int t = 0; t < 300; ++t) {
    const auto k = static_cast<Eigen::Index>(g.below(60));
    Vector x = Vector::Zero(60);
    for (Eigen::Index j = 0; j < k; ++j) x[j] = g.normal();
    const std::size_t pk = prog(x);
    for (std::size_t i = 0; i < 8; ++i) {
      inst.problem->local_gradient(i, x, grad);
      CHECK(prog(grad) <= pk + 1);
    }
  }
}

TEST_CASE("csv writers") {
  std::ostringstream a;
  write_progress_csv(a, simulate_progress(1.0, 2, 10, 3, 0));
  CHECK(a.str().rfind("omega,n,rounds,trials,p,mean_BT,se_BT,bound,fraction_below_bound\n1,2,10,3,0.5,", 0) == 0);
  std::ostringstream b;
  FloorAudit f;
  f.rows.push_back({3, 2, 0.5, 0.25, false});
  write_floor_audit_csv(b, f);
  CHECK(b.str() == "round,prog,subopt,floor,violated\n3,2,0.5,0.25,0\n");
}
