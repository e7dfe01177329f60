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
#ifndef COMMSIM_CORE_HPP_
#define COMMSIM_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace commsim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kSuboptFloor = 1e-15;
inline constexpr double kDivergenceThreshold = 1e12;

void require_dim(const Vector& x, std::size_t d, const char* what);
bool all_finite(const Vector& x);

// A finite-sum objective f(x) = (1/n) sum_i f_i(x) with per-worker oracles.
// Oracles are const and must not touch shared mutable state: the round
// kernels call them concurrently from several threads.
class Problem {
 public:
  Problem(std::string name, std::size_t n, std::size_t d, double L, double mu);
  virtual ~Problem() = default;

  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;

  const std::string& name() const { return name_; }
  std::size_t workers() const { return n_; }
  std::size_t dim() const { return d_; }
  double smoothness() const { return L_; }
  double strong_convexity() const { return mu_; }
  double condition_number() const;
  double delta() const { return delta_; }
  const Vector& initial_point() const { return x0_; }

  bool has_optimum() const { return f_star_.has_value(); }
  double optimal_value() const;
  const std::optional<Vector>& minimizer() const { return x_star_; }

  virtual double local_value(std::size_t i, const Vector& x) const = 0;
  virtual void local_gradient(std::size_t i, const Vector& x,
                              Vector& out) const = 0;

  // Defaults average the local oracles; quadratics override with the
  // aggregated form.
  virtual double value(const Vector& x) const;
  virtual void gradient(const Vector& x, Vector& out) const;

  // f(x) - f*. Quadratics with a known minimizer evaluate it as
  // (1/2)(x-x*)' H (x-x*), which avoids cancellation near the optimum.
  virtual double gap(const Vector& x) const;

  // Dense averaged Hessian, when the objective is quadratic.
  virtual std::optional<Matrix> hessian() const { return std::nullopt; }

  const std::map<std::string, std::string>& metadata() const { return meta_; }

  // Construction-time setters; instances are treated as immutable once
  // shared with an algorithm.
  void set_optimum(double f_star, std::optional<Vector> x_star);
  void set_initial_point(Vector x0);
  void set_delta(double delta) { delta_ = delta; }
  void annotate(const std::string& key, const std::string& value);
  void annotate(const std::string& key, double value);

 private:
  std::string name_;
  std::size_t n_;
  std::size_t d_;
  double L_;
  double mu_;
  double delta_ = 0.0;
  Vector x0_;
  std::optional<double> f_star_;
  std::optional<Vector> x_star_;
  std::map<std::string, std::string> meta_;
};

using ProblemPtr = std::shared_ptr<const Problem>;

Vector grad_full(const Problem& problem, const Vector& x);
double suboptimality(const Problem& problem, const Vector& x);

struct SmoothnessEstimate {
  double L;
  double mu;
};

// Quadratics: extreme eigenvalues of the averaged Hessian. Otherwise:
// extreme secant curvatures of f over random probe pairs.
SmoothnessEstimate estimate_smoothness(const Problem& problem,
                                       std::size_t trials,
                                       std::uint64_t seed);

void write_metadata(std::ostream& os, const Problem& problem);

struct TraceMeta {
  std::string algorithm;
  std::string compressor;
  double omega = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
};

struct TracePoint {
  std::size_t round;
  double bits;
  double subopt;
  std::optional<double> lyapunov;
};

class Trace {
 public:
  Trace() = default;
  explicit Trace(TraceMeta meta) : meta_(std::move(meta)) {}

  void record(std::size_t round, double bits, double subopt,
              std::optional<double> lyapunov = std::nullopt);
  void mark_diverged(std::size_t round);

  const TraceMeta& meta() const { return meta_; }
  TraceMeta& meta() { return meta_; }
  const std::vector<TracePoint>& points() const { return points_; }
  bool diverged() const { return diverged_round_.has_value(); }
  std::optional<std::size_t> diverged_round() const { return diverged_round_; }

 private:
  TraceMeta meta_;
  std::vector<TracePoint> points_;
  std::optional<std::size_t> diverged_round_;
};

inline constexpr const char* kTraceHeader =
    "algorithm,compressor,omega,n,d,seed,trial,round,bits_cum,subopt,lyapunov";

std::string format_double(double v);
void write_trace_csv(std::ostream& os, std::span<const Trace> traces,
                     bool header = true);
std::vector<Trace> read_trace_csv(std::istream& is);

}  // namespace commsim

#endif  // COMMSIM_CORE_HPP_
