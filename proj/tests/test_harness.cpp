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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <doctest.h>

#include "commsim/harness.hpp"
#include "commsim/problems.hpp"

using namespace commsim;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Trace make_trace(std::vector<std::pair<double, double>> pts, std::size_t trial = 0) {
  TraceMeta m;
  m.algorithm = "adiana";
  m.compressor = "identity";
  m.trial = trial;
  Trace t(m);
  for (std::size_t k = 0; k < pts.size(); ++k) t.record(k, pts[k].first, pts[k].second);
  return t;
}

const char* kSmallLs =
    "[problem]\ntype = least_squares\nd = 20\nn = 10\nM = 5\ncond = 100\nseed = 3\n"
    "[algorithm]\nname = diana\ngamma = 0.002\n"
    "[compressor]\nkind = random_s\ns = 2\n"
    "[run]\nrounds = 200\ntrials = 3\nseed = 9\neps = 1e-1,1e-3\n";

}  // namespace

TEST_CASE("config keys") {
  const ExperimentConfig c = parse(kSmallLs);
  CHECK(c.problem.type == "least_squares");
  CHECK(c.problem.n == 10);
  CHECK(c.problem.cond == 100.0);
  CHECK(c.algorithm.name == "diana");
  CHECK(c.algorithm.gamma == 0.002);
  CHECK(*c.compressor.hint == "random_s:2");
  CHECK(c.rounds == 200);
  CHECK(c.trials == 3);
  CHECK(c.eps == std::vector<double>{1e-1, 1e-3});
  CHECK(c.execution == Execution::kSerial);

  CHECK_THROWS_AS(parse("[problem]\ntypo = 1\n[compressor]\nhint = natural\n"), ConfigError);
  CHECK_THROWS_AS(parse("[extra]\nx = 1\n[compressor]\nhint = natural\n"), ConfigError);
  CHECK_THROWS_AS(parse("[run]\neps = 1e-4,1e-2\n[compressor]\nhint = natural\n"), ConfigError);
  CHECK_THROWS_AS(parse("[run]\ntrials = 0\n[compressor]\nhint = natural\n"), ConfigError);
  CHECK_THROWS_AS(parse("[algorithm]\nname = sgd\n"), ConfigError);
  CHECK_THROWS_AS(parse("[algorithm]\nname = adiana\n"), ConfigError);
  CHECK_THROWS_AS(parse("[algorithm]\npreset = nope\n"), ConfigError);
  CHECK_THROWS_AS(parse("[run]\nrounds = many\n[compressor]\nhint = natural\n"), ConfigError);
}

TEST_CASE("presets and overrides") {
  const ExperimentConfig c = parse("[algorithm]\npreset = fig1-adiana-id-rand1\n");
  CHECK(c.algorithm.name == "adiana");
  CHECK(c.algorithm.schedule == "manual");
  CHECK(c.algorithm.manual.eta.at(0) == 1.5e-4);
  CHECK(c.algorithm.manual.theta2.at(0) == 1.3e-1);
  CHECK(c.algorithm.manual.p.at(0) == 1.5e-1);
  CHECK(*c.compressor.hint == "random_s:1");

  const ExperimentConfig o = parse(
      "[algorithm]\npreset = fig1-adiana-id-rand1\neta = 1e-5\n[compressor]\nkind = natural\n");
  CHECK(o.algorithm.manual.eta.at(0) == 1e-5);
  CHECK(o.algorithm.manual.theta1.at(0) == 1.8e-1);
  CHECK(*o.compressor.hint == "natural");

  const ExperimentConfig n = parse("[algorithm]\npreset = ls-nesterov\n");
  CHECK(n.algorithm.name == "nesterov");
  CHECK(n.algorithm.eta == 3.0e-2);
  CHECK(build_compressor(n, 20).id() == "identity");

  const ExperimentConfig s = parse("[algorithm]\nname = adiana\n[compressor]\nhint = random_s:1\n");
  CHECK(s.algorithm.schedule == "sc");
}

TEST_CASE("seed override from the environment") {
  ExperimentConfig c = parse(kSmallLs);
  setenv("COMMSIM_SEED", "77", 1);
  apply_env_overrides(c);
  unsetenv("COMMSIM_SEED");
  CHECK(c.seed == 77);
  apply_env_overrides(c);
  CHECK(c.seed == 77);
}

TEST_CASE("total communication cost") {
  const std::vector<Trace> one{make_trace({{0, 1e-9}})};
  const TccResult z = compute_tcc(one, 1e-6);
  CHECK(z.reached());
  CHECK(*z.rounds == 0);
  CHECK(*z.bits == 0.0);

  // Fixed cost b per round: tcc = T b.
  const std::vector<Trace> fixed{make_trace({{0, 1}, {69, 0.5}, {138, 0.1}, {207, 1e-3}})};
  CHECK(*compute_tcc(fixed, 0.2).rounds == 2);
  CHECK(*compute_tcc(fixed, 0.2).bits == 138.0);
  CHECK_FALSE(compute_tcc(fixed, 1e-6).reached());

  // Mean over trials, not any single trial.
  const std::vector<Trace> two{make_trace({{0, 1}, {10, 0.1}, {20, 0.0}}, 0),
                               make_trace({{0, 1}, {12, 0.5}, {22, 0.1}}, 1)};
  const TccResult m = compute_tcc(two, 0.2);
  CHECK(*m.rounds == 2);
  CHECK(*m.bits == 21.0);

  // Tighter targets never cost less.
  double prev = 0.0;
  for (double e : {0.9, 0.3, 0.2, 0.05}) {
    const TccResult r = compute_tcc(two, e);
    if (!r.reached()) break;
    CHECK(*r.bits >= prev);
    prev = *r.bits;
  }

  // A trial that stopped early leaves later targets unreached.
  Trace d = make_trace({{0, 1}, {10, 1e3}});
  d.mark_diverged(1);
  const std::vector<Trace> mix{make_trace({{0, 1}, {10, 0.5}, {20, 1e-8}}), d};
  CHECK_FALSE(compute_tcc(mix, 1e-6).reached());
}

TEST_CASE("summary statistics") {
  const std::vector<Trace> one{make_trace({{0, 2}, {5, 1}})};
  const auto s1 = summarize(one);
  CHECK(s1[1].std == 0.0);
  CHECK(s1[1].count == 1);
  const std::vector<Trace> two{make_trace({{0, 1}, {4, 1}}, 0), make_trace({{0, 1}, {6, 3}}, 1)};
  const auto s2 = summarize(two);
  CHECK(s2[1].mean == 2.0);
  CHECK(s2[1].bits == 5.0);
  CHECK(s2[1].std == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("deterministic baselines have zero spread") {
  ExperimentConfig c = parse(
      "[problem]\ntype = least_squares\nd = 20\nn = 10\nM = 5\ncond = 100\n"
      "[algorithm]\nname = nesterov\neta = 0.001\ntheta = 0.3\n"
      "[run]\nrounds = 50\ntrials = 20\n");
  const ExperimentResult r = run_experiment(c);
  for (const auto& row : r.summary) {
    CHECK(row.std == 0.0);
    CHECK(row.count == 20);
  }
}

TEST_CASE("experiment outputs") {
  namespace fs = std::filesystem;
  fs::create_directories("harness_out");
  ExperimentConfig c = parse(kSmallLs);
  c.output = "harness_out/small";
  const ExperimentResult r = run_experiment(c);
  CHECK(r.traces.size() == 3);
  CHECK(r.tcc.size() == 2);
  const std::string raw = slurp("harness_out/small.raw.csv");
  const std::string sum = slurp("harness_out/small.summary.csv");
  const std::string meta = slurp("harness_out/small.meta.txt");
  CHECK(raw.rfind(std::string(kTraceHeader) + "\n", 0) == 0);
  CHECK(sum.rfind("# ", 0) == 0);
  CHECK(sum.find(kSummaryHeader) != std::string::npos);
  CHECK(meta.find("algorithm=diana\n") != std::string::npos);
  CHECK(meta.find("compressor=rand-2-id\n") != std::string::npos);

  // Same config and seed: identical files.
  run_experiment(c);
  CHECK(slurp("harness_out/small.raw.csv") == raw);
  CHECK(slurp("harness_out/small.summary.csv") == sum);

  // The summary is recomputable from the raw traces.
  std::istringstream in(raw);
  const auto traces = read_trace_csv(in);
  const auto rows = summarize(traces);
  REQUIRE(rows.size() == r.summary.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    CHECK(rows[j].mean == doctest::Approx(r.summary[j].mean).epsilon(1e-12));
    CHECK(rows[j].std == doctest::Approx(r.summary[j].std).epsilon(1e-12));
  }

  ExperimentConfig other = c;
  other.seed = 10;
  other.output = "harness_out/other";
  run_experiment(other);
  CHECK(slurp("harness_out/other.raw.csv") != raw);
}

TEST_CASE("grid files") {
  std::istringstream is("[grid]\ngamma = 0.1,0.2\neta = log:1e-4:1e-2:3\n[tune]\nbudget_fraction = 0.5\n");
  const GridSpec g = parse_grid(is);
  REQUIRE(g.axes.size() == 2);
  CHECK(g.axes[0].first == "gamma");
  CHECK(g.axes[0].second == std::vector<double>{0.1, 0.2});
  CHECK(g.axes[1].second[1] == doctest::Approx(1e-3));
  CHECK(g.budget_fraction == 0.5);
  std::istringstream bad("[grid]\n[tune]\nbudget_fraction = 0.5\n");
  CHECK_THROWS_AS(parse_grid(bad), ConfigError);
  std::istringstream frac("[grid]\nx = 1\n[tune]\nbudget_fraction = 2\n");
  CHECK_THROWS_AS(parse_grid(frac), ConfigError);
}

TEST_CASE("grid tuning") {
  ExperimentConfig c = parse(
      "[problem]\ntype = least_squares\nd = 20\nn = 10\nM = 5\ncond = 100\nseed = 3\n"
      "[algorithm]\nname = diana\ngamma = 0.001\n"
      "[compressor]\nhint = identity\n"
      "[run]\nrounds = 60\n");
  const ProblemPtr p = build_problem(c.problem);
  const double L = p->smoothness();

  GridSpec single;
  single.axes = {{"gamma", {0.5 / L}}};
  single.budget_fraction = 1.0;
  const TuneResult one = tune_grid(c, single, p);
  CHECK(one.evaluated.size() == 1);
  CHECK(one.best.params[0].second == 0.5 / L);

  // Gradient descent on a non-isotropic quadratic: 1/L beats 2/L and 1/(2L).
  GridSpec gd;
  gd.axes = {{"gamma", {2.0 / L, 1.0 / L, 0.5 / L}}};
  gd.budget_fraction = 1.0;
  const TuneResult t = tune_grid(c, gd, p);
  CHECK(t.evaluated.size() == 3);
  CHECK(t.best.params[0].second == 1.0 / L);

  GridSpec wild;
  wild.axes = {{"gamma", {10.0 / L, 20.0 / L}}};
  wild.budget_fraction = 1.0;
  CHECK_THROWS_AS(tune_grid(c, wild, p), ConfigError);

  // Odometer order over two axes.
  ExperimentConfig a = parse(
      "[problem]\ntype = least_squares\nd = 20\nn = 10\nM = 5\ncond = 100\nseed = 3\n"
      "[algorithm]\nname = adiana\neta = 0.001\ntheta1 = 0.1\ntheta2 = 0.1\np = 0.5\n"
      "[compressor]\nhint = random_s:4\n[run]\nrounds = 50\n");
  GridSpec two;
  two.axes = {{"eta", {0.5 / L, 0.25 / L}}, {"theta1", {0.1, 0.95}}};
  two.budget_fraction = 0.2;
  const TuneResult u = tune_grid(a, two, p);
  REQUIRE(u.evaluated.size() == 4);
  CHECK(u.evaluated[1].params[1].second == 0.95);
  CHECK(u.evaluated[1].diverged);  // theta1 + theta2 >= 1 is rejected
  CHECK(u.evaluated[2].params[0].second == 0.25 / L);
  CHECK_FALSE(u.best.diverged);
}

TEST_CASE("least squares configs end to end") {
  for (const char* name : {"ls-adiana-rs", "ls-diana-rs", "ls-ef21-rs", "ls-nesterov"}) {
    ExperimentConfig c = load_config(std::string(COMMSIM_CONFIG_DIR) + "/" + name + ".ini");
    c.rounds = 40;
    c.trials = 2;
    c.output.clear();
    const ExperimentResult r = run_experiment(c);
    CHECK_FALSE(r.partial);
    CHECK(r.traces[0].points().back().subopt < r.traces[0].points().front().subopt);
    CHECK(r.problem->dim() == 20);
    CHECK(r.problem->workers() == 400);
  }
}
