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
#ifndef COMMSIM_PROBLEMS_HPP_
#define COMMSIM_PROBLEMS_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commsim/core.hpp"

namespace commsim {

// f(x) = (1/2) x'Hx + c'x + k on the average; subclasses supply the
// per-worker pieces. finalize() solves for the minimizer.
class QuadraticProblem : public Problem {
 public:
  using Problem::Problem;

  double value(const Vector& x) const override;
  void gradient(const Vector& x, Vector& out) const override;
  double gap(const Vector& x) const override;
  std::optional<Matrix> hessian() const override { return H_; }

  const Matrix& averaged_hessian() const { return H_; }
  const Vector& averaged_linear() const { return c_; }

 protected:
  void finalize(Matrix H, Vector c, double k);

 private:
  Matrix H_;
  Vector c_;
  double k_ = 0.0;
};

// Per-worker f_i(x) = (ridge/2)|x|^2 + weight * (sum over links (x_a-x_b)^2
// + sum over anchors x_a^2) + sum_j lin_j x_j. Indices are 0-based.
struct ChainTerms {
  double weight = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> links;
  std::vector<std::size_t> anchors;
  std::vector<std::pair<std::size_t, double>> linear;
};

class ChainQuadratic : public QuadraticProblem {
 public:
  ChainQuadratic(std::string name, std::size_t d, double L, double mu,
                 double ridge, std::vector<ChainTerms> workers);

  double local_value(std::size_t i, const Vector& x) const override;
  void local_gradient(std::size_t i, const Vector& x,
                      Vector& out) const override;

  const ChainTerms& terms(std::size_t i) const { return workers_.at(i); }
  double ridge() const { return ridge_; }

 private:
  double ridge_;
  std::vector<ChainTerms> workers_;
};

class LeastSquaresProblem : public QuadraticProblem {
 public:
  LeastSquaresProblem(std::string name, std::vector<Matrix> A,
                      std::vector<Vector> b);

  double local_value(std::size_t i, const Vector& x) const override;
  void local_gradient(std::size_t i, const Vector& x,
                      Vector& out) const override;

  const Matrix& block(std::size_t i) const { return A_.at(i); }
  const Vector& rhs(std::size_t i) const { return b_.at(i); }
  // Largest eigenvalue of A_i'A_i over workers.
  double local_smoothness_max() const { return local_L_max_; }

 private:
  static double averaged_lmax(const std::vector<Matrix>& A);
  static double averaged_lmin(const std::vector<Matrix>& A);

  std::vector<Matrix> A_;
  std::vector<Vector> b_;
  std::vector<Matrix> gram_;
  std::vector<Vector> atb_;
  double local_L_max_ = 0.0;
};

struct LeastSquaresSpec {
  std::size_t n = 400;
  std::size_t M = 25;
  std::size_t d = 20;
  // Target condition number of f, i.e. of the averaged Hessian. Singular
  // values of the stacked matrix run arithmetically from 1 to sqrt(cond).
  double cond = 1e4;
  std::uint64_t seed = 0;
  // false: b_i = 0 and x0 ~ N(0, I). true: b_i ~ N(0, I) and x0 = 0.
  bool random_rhs = false;
};

std::shared_ptr<LeastSquaresProblem> gen_least_squares(
    const LeastSquaresSpec& spec);

struct LibsvmData {
  std::vector<double> labels;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::size_t max_index = 0;
};

LibsvmData parse_libsvm(std::istream& is);
void write_libsvm(std::ostream& os, const LibsvmData& data);

class LogisticProblem : public Problem {
 public:
  // Rows of A_i are the data points a_{i,m}; labels are +-1.
  LogisticProblem(std::string name, std::vector<Matrix> A,
                  std::vector<Vector> labels);

  double local_value(std::size_t i, const Vector& x) const override;
  void local_gradient(std::size_t i, const Vector& x,
                      Vector& out) const override;

  std::size_t points_per_worker() const;

 private:
  static double smoothness_bound(const std::vector<Matrix>& A);

  std::vector<Matrix> A_;
  std::vector<Vector> y_;
};

// Contiguous equal partition of the first n*M points; M defaults to
// floor(N/n).
std::shared_ptr<LogisticProblem> make_logistic(
    const LibsvmData& data, std::size_t n,
    std::optional<std::size_t> M = std::nullopt, std::string name = "logistic");
std::shared_ptr<LogisticProblem> load_libsvm(
    const std::string& path, std::size_t n,
    std::optional<std::size_t> M = std::nullopt);

struct ReferenceOptimumOptions {
  std::size_t max_iters = 100000;
  double grad_tol = 1e-12;
  // Key-value cache file; read if present, written otherwise.
  std::optional<std::string> cache_path;
};

// Uncompressed accelerated gradient run; sets f*, x* and delta on the
// problem. Returns the number of iterations spent (0 on cache hit).
std::size_t attach_reference_optimum(Problem& problem,
                                     const ReferenceOptimumOptions& opts = {});

std::shared_ptr<ChainQuadratic> gen_constructed_quadratic(double mu = 1.0,
                                                          double L = 1e4,
                                                          std::size_t d = 20,
                                                          std::size_t n = 400);

enum class HardFamily { kScExample1, kGcExample1, kGcExample3, kScHomogeneous };

std::string to_string(HardFamily family);

struct HardInstance {
  std::shared_ptr<ChainQuadratic> problem;
  HardFamily family;
  double lambda = 0.0;
  // Decay ratio of the strongly convex chain; 0 for the other families.
  double q = 0.0;
  // Closed form of the untruncated minimizer, restricted to d coordinates.
  Vector closed_form_minimizer;
};

double chain_decay_ratio(double kappa, std::size_t n);

// Truncated at d with a free boundary. If eps_target is set and the
// truncated chain cannot represent a floor below it, a warning is stored in
// the problem metadata.
HardInstance gen_zero_chain_sc(double L, double mu, std::size_t n,
                               std::size_t d, double delta = 1.0,
                               std::optional<double> eps_target = std::nullopt);
HardInstance gen_zero_chain_gc(double L, std::size_t n, std::size_t d,
                               double delta = 1.0);
HardInstance gen_zero_chain_gc3(double L, std::size_t n, std::size_t d,
                                double delta = 1.0);
HardInstance gen_sc_homogeneous(double L, double mu, std::size_t n,
                                std::size_t d, double delta = 1.0);

}  // namespace commsim

#endif  // COMMSIM_PROBLEMS_HPP_
