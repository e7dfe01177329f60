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
#include <sstream>

#include <doctest.h>

#include "commsim/algorithms.hpp"
#include "commsim/core.hpp"
#include "commsim/problems.hpp"
#include "commsim/random.hpp"

using namespace commsim;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index j = 0;
  for (double a : v) x[j++] = a;
  return x;
}

std::shared_ptr<LeastSquaresProblem> half_norm(std::size_t d) {
  return std::make_shared<LeastSquaresProblem>(
      "half_norm", std::vector<Matrix>{Matrix::Identity(d, d)},
      std::vector<Vector>{Vector::Zero(d)});
}

LibsvmData small_logistic_data() {
  std::istringstream in(
      "+1 1:0.5 3:1.0\n-1 2:1.5\n+1 1:-0.25 2:0.75 4:2\n-1 3:0.5 4:-1\n"
      "+1 2:1 3:1\n-1 1:2\n");
  return parse_libsvm(in);
}

Vector gaussian(std::size_t d, std::uint64_t seed, std::size_t k) {
  KeyedStream g(seed, StreamDomain::kProbe, k, 99);
  Vector x(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < x.size(); ++j) x[j] = g.normal();
  return x;
}

// Worst relative error between the gradient oracle and central differences.
double fd_error(const Problem& p, std::size_t probes) {
  double worst = 0.0;
  const auto d = static_cast<Eigen::Index>(p.dim());
  for (std::size_t t = 0; t < probes; ++t) {
    const Vector x = gaussian(p.dim(), 7, t);
    const std::size_t i = t % p.workers();
    Vector g;
    p.local_gradient(i, x, g);
    Vector fd(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Vector a = x, b = x;
      a[j] += h;
      b[j] -= h;
      fd[j] = (p.local_value(i, a) - p.local_value(i, b)) / (2 * h);
    }
    worst = std::max(worst, (g - fd).norm() / std::max(1.0, g.norm()));
  }
  return worst;
}

}  // namespace

TEST_CASE("grad_full averages local gradients") {
  auto p = half_norm(2);
  CHECK(grad_full(*p, vec({2, 0})).isApprox(vec({2, 0})));
  CHECK(grad_full(*p, Vector::Zero(2)).norm() < 1e-9);

  // A_1 = I, A_2 = 2I: mean of A_i'A_i x at (1,1) is (1 + 4)/2.
  LeastSquaresProblem two("two", {Matrix::Identity(2, 2), 2.0 * Matrix::Identity(2, 2)},
                          {Vector::Zero(2), Vector::Zero(2)});
  const Vector g = grad_full(two, vec({1, 1}));
  CHECK(g[0] == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(2.5).epsilon(1e-15));

  CHECK_THROWS_AS(grad_full(two, Vector::Zero(3)), DimensionError);
}

TEST_CASE("grad_full with identical workers equals a local gradient") {
  const auto inst = gen_sc_homogeneous(100.0, 1.0, 5, 12);
  const Vector x = gaussian(12, 3, 0);
  Vector gi;
  inst.problem->local_gradient(3, x, gi);
  CHECK((grad_full(*inst.problem, x) - gi).norm() <= 1e-12 * gi.norm());
}

TEST_CASE("suboptimality") {
  auto p = half_norm(2);
  CHECK(suboptimality(*p, vec({1, 1})) == doctest::Approx(1.0));
  CHECK(suboptimality(*p, Vector::Zero(2)) < 1e-9);

  // Constructed quadratic at 0 against an independent dense solve of the
  // Hessian assembled from gradient differences.
  const auto q = gen_constructed_quadratic();
  const auto d = static_cast<Eigen::Index>(q->dim());
  const Vector c = grad_full(*q, Vector::Zero(d));
  Matrix H(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    H.col(j) = grad_full(*q, Vector::Unit(d, j)) - c;
  }
  const Vector xs = H.fullPivLu().solve(-c);
  const double fstar = 0.5 * xs.dot(H * xs) + c.dot(xs);
  const double expect = q->value(Vector::Zero(d)) - fstar;
  CHECK(suboptimality(*q, Vector::Zero(d)) == doctest::Approx(expect).epsilon(1e-9));
  CHECK(suboptimality(*q, Vector::Zero(d)) == doctest::Approx(1187.14).epsilon(1e-5));
  CHECK(suboptimality(*q, *q->minimizer()) < 1e-9);
}

TEST_CASE("estimate_smoothness") {
  auto p = half_norm(2);
  const auto e = estimate_smoothness(*p, 10, 0);
  CHECK(e.L == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(e.mu == doctest::Approx(1.0).epsilon(1e-6));

  const auto q = gen_constructed_quadratic();
  const auto eq = estimate_smoothness(*q, 10, 0);
  CHECK(eq.mu >= 1.0);
  CHECK(eq.L <= 1e4 * (1 + 1e-6));
  CHECK(eq.mu == doctest::Approx(56.84).epsilon(1e-3));
  CHECK(eq.L == doctest::Approx(9944.16).epsilon(1e-5));

  LeastSquaresSpec s;
  const auto ls = gen_least_squares(s);
  const auto el = estimate_smoothness(*ls, 10, 0);
  CHECK(el.L / el.mu == doctest::Approx(1e4).epsilon(1e-2));

  // Secant probes on a non-quadratic objective stay within the declared L.
  const auto lg = make_logistic(small_logistic_data(), 2);
  const auto eg = estimate_smoothness(*lg, 50, 1);
  CHECK(eg.L <= lg->smoothness() * (1 + 1e-6));
  CHECK(eg.mu >= 0.0);
}

TEST_CASE("gradient oracles match central differences") {
  CHECK(fd_error(*gen_constructed_quadratic(1.0, 100.0, 10, 4), 100) <= 1e-5);
  LeastSquaresSpec s;
  s.n = 6;
  s.M = 5;
  s.d = 8;
  s.cond = 100;
  s.random_rhs = true;
  CHECK(fd_error(*gen_least_squares(s), 100) <= 1e-5);
  CHECK(fd_error(*make_logistic(small_logistic_data(), 3), 100) <= 1e-5);
  CHECK(fd_error(*gen_zero_chain_sc(100.0, 1.0, 3, 10).problem, 100) <= 1e-5);
  CHECK(fd_error(*gen_zero_chain_gc(1.0, 3, 10).problem, 100) <= 1e-5);
  CHECK(fd_error(*gen_zero_chain_gc3(2.0, 3, 10).problem, 100) <= 1e-5);
  CHECK(fd_error(*gen_sc_homogeneous(100.0, 1.0, 3, 10).problem, 100) <= 1e-5);
}

TEST_CASE("trace recording rules") {
  Trace t(TraceMeta{"x", "identity", 0.0, 1, 1, 0, 0});
  t.record(0, 0.0, 0.0);
  CHECK(t.points().back().subopt == kSuboptFloor);
  t.record(1, 64.0, 2.0);
  CHECK_THROWS_AS(t.record(1, 128.0, 1.0), Error);
  CHECK_THROWS_AS(t.record(2, 10.0, 1.0), Error);
  CHECK_FALSE(t.diverged());
  t.mark_diverged(3);
  CHECK(t.diverged());
  CHECK(*t.diverged_round() == 3);
}

TEST_CASE("cumulative bits of a fixed-length compressor") {
  const auto q = gen_constructed_quadratic(1.0, 100.0, 20, 4);
  const auto spec = CompressorSpec::random_s(20, 1);
  RunOptions o;
  o.rounds = 50;
  o.checkpoint_every = 1;
  const Trace t = run_diana(*q, spec, 1e-3, std::nullopt, o);
  REQUIRE(t.points().size() == 51);
  for (const auto& p : t.points()) {
    CHECK(p.bits == static_cast<double>(p.round) * 69.0);
  }
}

TEST_CASE("trace csv round trip") {
  std::vector<Trace> ts;
  for (std::size_t trial = 0; trial < 2; ++trial) {
    Trace t(TraceMeta{"adiana", "rand-1-id", 19.0, 400, 20, 5, trial});
    t.record(0, 0.0, 1187.1403, 3.5);
    t.record(1, 138.0, 0.1 + 0.2);
    t.record(10, 1380.0, 1e-300);
    ts.push_back(t);
  }
  std::stringstream ss;
  write_trace_csv(ss, ts);
  const std::string text = ss.str();
  CHECK(text.rfind(std::string(kTraceHeader) + "\n", 0) == 0);
  const auto back = read_trace_csv(ss);
  REQUIRE(back.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(back[k].meta().trial == k);
    CHECK(back[k].meta().omega == 19.0);
    REQUIRE(back[k].points().size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(back[k].points()[j].round == ts[k].points()[j].round);
      CHECK(back[k].points()[j].bits == ts[k].points()[j].bits);
      CHECK(back[k].points()[j].subopt == ts[k].points()[j].subopt);
      CHECK(back[k].points()[j].lyapunov == ts[k].points()[j].lyapunov);
    }
  }
  std::stringstream again;
  write_trace_csv(again, back);
  CHECK(again.str() == text);

  std::istringstream bad("adiana,x,1,2,3\n");
  CHECK_THROWS_AS(read_trace_csv(bad), Error);
}

TEST_CASE("format_double is shortest round trip") {
  for (double v : {0.1, 1.0 / 3.0, 1e-15, 12345678.9, 5e-324, 69.0}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(69.0) == "69");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("problem constants are validated") {
  CHECK_THROWS_AS(gen_constructed_quadratic(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(gen_constructed_quadratic(1.0, 1e4, 19, 400), ConfigError);
  auto p = half_norm(3);
  CHECK_THROWS_AS(p->set_initial_point(Vector::Zero(2)), DimensionError);
}
