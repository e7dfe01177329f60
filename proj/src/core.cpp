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
#include "commsim/core.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "commsim/random.hpp"

namespace commsim {

void require_dim(const Vector& x, std::size_t d, const char* what) {
  if (static_cast<std::size_t>(x.size()) != d) {
    throw DimensionError(fmt::format("{}: expected length {}, got {}", what, d,
                                     x.size()));
  }
}

bool all_finite(const Vector& x) { return x.allFinite(); }

Problem::Problem(std::string name, std::size_t n, std::size_t d, double L,
                 double mu)
    : name_(std::move(name)), n_(n), d_(d), L_(L), mu_(mu),
      x0_(Vector::Zero(static_cast<Eigen::Index>(d))) {
  if (n == 0 || d == 0) throw ConfigError("problem needs n >= 1 and d >= 1");
  if (!(L > 0.0) || mu < 0.0 || mu > L) {
    throw ConfigError(fmt::format("invalid constants L={} mu={}", L, mu));
  }
}

double Problem::condition_number() const {
  return mu_ > 0.0 ? L_ / mu_ : std::numeric_limits<double>::infinity();
}

double Problem::optimal_value() const {
  if (!f_star_) {
    throw Error("f* unavailable for problem '" + name_ +
                "': precompute a reference optimum first");
  }
  return *f_star_;
}

double Problem::value(const Vector& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += local_value(i, x);
  return s / static_cast<double>(n_);
}

void Problem::gradient(const Vector& x, Vector& out) const {
  out.setZero(static_cast<Eigen::Index>(d_));
  Vector g(static_cast<Eigen::Index>(d_));
  for (std::size_t i = 0; i < n_; ++i) {
    local_gradient(i, x, g);
    out += g;
  }
  out /= static_cast<double>(n_);
}

double Problem::gap(const Vector& x) const {
  return value(x) - optimal_value();
}

void Problem::set_optimum(double f_star, std::optional<Vector> x_star) {
  f_star_ = f_star;
  x_star_ = std::move(x_star);
  if (x_star_) require_dim(*x_star_, d_, "minimizer");
}

void Problem::set_initial_point(Vector x0) {
  require_dim(x0, d_, "initial point");
  x0_ = std::move(x0);
}

void Problem::annotate(const std::string& key, const std::string& value) {
  meta_[key] = value;
}

void Problem::annotate(const std::string& key, double value) {
  meta_[key] = format_double(value);
}

Vector grad_full(const Problem& problem, const Vector& x) {
  require_dim(x, problem.dim(), "grad_full");
  Vector g;
  problem.gradient(x, g);
  return g;
}

double suboptimality(const Problem& problem, const Vector& x) {
  require_dim(x, problem.dim(), "suboptimality");
  return problem.gap(x);
}

SmoothnessEstimate estimate_smoothness(const Problem& problem,
                                       std::size_t trials,
                                       std::uint64_t seed) {
  if (trials == 0) throw ConfigError("estimate_smoothness needs trials >= 1");
  if (auto h = problem.hessian()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(*h, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().maxCoeff(), es.eigenvalues().minCoeff()};
  }
  const auto d = static_cast<Eigen::Index>(problem.dim());
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  Vector x(d), y(d), g;
  for (std::size_t t = 0; t < trials; ++t) {
    KeyedStream rng(seed, StreamDomain::kProbe, t);
    for (Eigen::Index j = 0; j < d; ++j) x[j] = rng.normal();
    for (Eigen::Index j = 0; j < d; ++j) y[j] = x[j] + 1e-2 * rng.normal();
    problem.gradient(x, g);
    const double r2 = (y - x).squaredNorm();
    const double c =
        2.0 * (problem.value(y) - problem.value(x) - g.dot(y - x)) / r2;
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return {hi, std::max(lo, 0.0)};
}

void write_metadata(std::ostream& os, const Problem& problem) {
  os << "name=" << problem.name() << '\n';
  os << "n=" << problem.workers() << '\n';
  os << "d=" << problem.dim() << '\n';
  os << "L=" << format_double(problem.smoothness()) << '\n';
  os << "mu=" << format_double(problem.strong_convexity()) << '\n';
  os << "delta=" << format_double(problem.delta()) << '\n';
  if (problem.has_optimum()) {
    os << "f_star=" << format_double(problem.optimal_value()) << '\n';
  }
  for (const auto& [k, v] : problem.metadata()) os << k << '=' << v << '\n';
}

void Trace::record(std::size_t round, double bits, double subopt,
                   std::optional<double> lyapunov) {
  if (!points_.empty()) {
    if (round <= points_.back().round) {
      throw Error("trace rounds must be strictly increasing");
    }
    if (bits < points_.back().bits) {
      throw Error("trace bits must be non-decreasing");
    }
  }
  points_.push_back({round, bits, std::max(subopt, kSuboptFloor), lyapunov});
}

void Trace::mark_diverged(std::size_t round) { diverged_round_ = round; }

std::string format_double(double v) { return fmt::format("{}", v); }

void write_trace_csv(std::ostream& os, std::span<const Trace> traces,
                     bool header) {
  if (header) os << kTraceHeader << '\n';
  for (const auto& t : traces) {
    const auto& m = t.meta();
    const std::string prefix =
        fmt::format("{},{},{},{},{},{},{},", m.algorithm, m.compressor,
                    format_double(m.omega), m.n, m.d, m.seed, m.trial);
    for (const auto& p : t.points()) {
      os << prefix << p.round << ',' << format_double(p.bits) << ','
         << format_double(p.subopt) << ',';
      if (p.lyapunov) os << format_double(*p.lyapunov);
      os << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(fmt::format("trace csv line {}: bad number '{}'", line, s));
  }
  return v;
}

}  // namespace

std::vector<Trace> read_trace_csv(std::istream& is) {
  std::vector<Trace> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line == kTraceHeader) continue;
    const auto f = split_csv(line);
    if (f.size() != 11) {
      throw Error(fmt::format("trace csv line {}: expected 11 fields, got {}",
                              lineno, f.size()));
    }
    TraceMeta m;
    m.algorithm = f[0];
    m.compressor = f[1];
    m.omega = parse_number(f[2], lineno);
    m.n = static_cast<std::size_t>(parse_number(f[3], lineno));
    m.d = static_cast<std::size_t>(parse_number(f[4], lineno));
    m.seed = std::stoull(f[5]);
    m.trial = static_cast<std::size_t>(parse_number(f[6], lineno));
    const bool same = !out.empty() && out.back().meta().algorithm == m.algorithm &&
                      out.back().meta().compressor == m.compressor &&
                      out.back().meta().seed == m.seed &&
                      out.back().meta().trial == m.trial;
    if (!same) out.emplace_back(m);
    std::optional<double> lyap;
    if (!f[10].empty()) lyap = parse_number(f[10], lineno);
    out.back().record(static_cast<std::size_t>(parse_number(f[7], lineno)),
                      parse_number(f[8], lineno), parse_number(f[9], lineno),
                      lyap);
  }
  return out;
}

}  // namespace commsim
