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
#include "commsim/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "commsim/random.hpp"

namespace commsim {

namespace {

struct Spectrum {
  double lmax;
  double lmin;
};

Spectrum spectrum(const Matrix& H) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().maxCoeff(),
          std::max(es.eigenvalues().minCoeff(), 0.0)};
}

double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

double QuadraticProblem::value(const Vector& x) const {
  require_dim(x, dim(), "value");
  return 0.5 * x.dot(H_ * x) + c_.dot(x) + k_;
}

void QuadraticProblem::gradient(const Vector& x, Vector& out) const {
  out.noalias() = H_ * x;
  out += c_;
}

double QuadraticProblem::gap(const Vector& x) const {
  if (minimizer()) {
    const Vector e = x - *minimizer();
    return 0.5 * e.dot(H_ * e);
  }
  return value(x) - optimal_value();
}

void QuadraticProblem::finalize(Matrix H, Vector c, double k) {
  H_ = std::move(H);
  c_ = std::move(c);
  k_ = k;
  Eigen::LDLT<Matrix> ldlt(H_);
  Vector xs = ldlt.solve(-c_);
  // One step of iterative refinement; chains with kappa ~ 1e4 lose a few
  // digits otherwise.
  xs += ldlt.solve(-c_ - H_ * xs);
  const double fs = 0.5 * xs.dot(H_ * xs) + c_.dot(xs) + k_;
  set_optimum(fs, xs);
  set_delta((initial_point() - xs).squaredNorm());
}

ChainQuadratic::ChainQuadratic(std::string name, std::size_t d, double L,
                               double mu, double ridge,
                               std::vector<ChainTerms> workers)
    : QuadraticProblem(std::move(name), workers.size(), d, L, mu),
      ridge_(ridge),
      workers_(std::move(workers)) {
  const auto dd = static_cast<Eigen::Index>(d);
  Matrix H = Matrix::Zero(dd, dd);
  Vector c = Vector::Zero(dd);
  for (const auto& w : workers_) {
    const double t = 2.0 * w.weight;
    for (auto [a, b] : w.links) {
      if (a >= d || b >= d) throw ConfigError("chain link out of range");
      H(a, a) += t;
      H(b, b) += t;
      H(a, b) -= t;
      H(b, a) -= t;
    }
    for (auto a : w.anchors) {
      if (a >= d) throw ConfigError("chain anchor out of range");
      H(a, a) += t;
    }
    for (auto [j, v] : w.linear) c[static_cast<Eigen::Index>(j)] += v;
  }
  const double inv = 1.0 / static_cast<double>(workers_.size());
  H *= inv;
  H.diagonal().array() += ridge_;
  c *= inv;
  finalize(std::move(H), std::move(c), 0.0);
}

double ChainQuadratic::local_value(std::size_t i, const Vector& x) const {
  const auto& w = workers_[i];
  double s = 0.0;
  for (auto [a, b] : w.links) {
    const double t = x[a] - x[b];
    s += t * t;
  }
  for (auto a : w.anchors) s += x[a] * x[a];
  double lin = 0.0;
  for (auto [j, v] : w.linear) lin += v * x[static_cast<Eigen::Index>(j)];
  return 0.5 * ridge_ * x.squaredNorm() + w.weight * s + lin;
}

void ChainQuadratic::local_gradient(std::size_t i, const Vector& x,
                                    Vector& out) const {
  const auto& w = workers_[i];
  out = ridge_ * x;
  const double t = 2.0 * w.weight;
  for (auto [a, b] : w.links) {
    const double diff = t * (x[a] - x[b]);
    out[a] += diff;
    out[b] -= diff;
  }
  for (auto a : w.anchors) out[a] += t * x[a];
  for (auto [j, v] : w.linear) out[static_cast<Eigen::Index>(j)] += v;
}

namespace {

struct LsPrepared {
  std::vector<Matrix> A;
  std::vector<Vector> b;
  Matrix H;
  Vector c;
  double k;
  Spectrum s;
};

LsPrepared prepare_ls(std::vector<Matrix> A, std::vector<Vector> b) {
  if (A.empty() || A.size() != b.size()) {
    throw ConfigError("least squares needs one (A_i, b_i) pair per worker");
  }
  const auto d = A.front().cols();
  Matrix H = Matrix::Zero(d, d);
  Vector c = Vector::Zero(d);
  double k = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].cols() != d || A[i].rows() != b[i].size()) {
      throw DimensionError("least squares block shape mismatch");
    }
    H.noalias() += A[i].transpose() * A[i];
    c.noalias() -= A[i].transpose() * b[i];
    k += 0.5 * b[i].squaredNorm();
  }
  const double inv = 1.0 / static_cast<double>(A.size());
  H *= inv;
  c *= inv;
  k *= inv;
  const Spectrum s = spectrum(H);
  return {std::move(A), std::move(b), std::move(H), std::move(c), k, s};
}

}  // namespace

LeastSquaresProblem::LeastSquaresProblem(std::string name,
                                         std::vector<Matrix> A,
                                         std::vector<Vector> b)
    : QuadraticProblem(std::move(name), A.size(),
                       A.empty() ? 1 : static_cast<std::size_t>(A[0].cols()),
                       averaged_lmax(A), averaged_lmin(A)) {
  auto p = prepare_ls(std::move(A), std::move(b));
  A_ = std::move(p.A);
  b_ = std::move(p.b);
  for (std::size_t i = 0; i < A_.size(); ++i) {
    gram_.push_back(A_[i].transpose() * A_[i]);
    atb_.push_back(A_[i].transpose() * b_[i]);
    local_L_max_ = std::max(local_L_max_, spectrum(gram_.back()).lmax);
  }
  annotate("local_L_max", local_L_max_);
  finalize(std::move(p.H), std::move(p.c), p.k);
}

double LeastSquaresProblem::averaged_lmax(const std::vector<Matrix>& A) {
  if (A.empty()) throw ConfigError("least squares needs n >= 1");
  Matrix H = Matrix::Zero(A[0].cols(), A[0].cols());
  for (const auto& a : A) H.noalias() += a.transpose() * a;
  return spectrum(H / static_cast<double>(A.size())).lmax;
}

double LeastSquaresProblem::averaged_lmin(const std::vector<Matrix>& A) {
  Matrix H = Matrix::Zero(A[0].cols(), A[0].cols());
  for (const auto& a : A) H.noalias() += a.transpose() * a;
  return spectrum(H / static_cast<double>(A.size())).lmin;
}

double LeastSquaresProblem::local_value(std::size_t i, const Vector& x) const {
  return 0.5 * (A_[i] * x - b_[i]).squaredNorm();
}

void LeastSquaresProblem::local_gradient(std::size_t i, const Vector& x,
                                         Vector& out) const {
  out.noalias() = gram_[i] * x;
  out -= atb_[i];
}

std::shared_ptr<LeastSquaresProblem> gen_least_squares(
    const LeastSquaresSpec& spec) {
  if (spec.n == 0 || spec.M == 0 || spec.d == 0) {
    throw ConfigError("least squares needs n, M, d >= 1");
  }
  if (spec.n * spec.M < spec.d) {
    throw ConfigError(fmt::format("least squares needs n*M >= d (got {}*{} < {})",
                                  spec.n, spec.M, spec.d));
  }
  if (!(spec.cond >= 1.0)) throw ConfigError("least squares needs cond >= 1");
  const auto rows = static_cast<Eigen::Index>(spec.n * spec.M);
  const auto d = static_cast<Eigen::Index>(spec.d);

  KeyedStream g(spec.seed, StreamDomain::kProblem, 0);
  Matrix G(rows, d);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index j = 0; j < d; ++j) G(r, j) = g.normal();
  }
  Eigen::BDCSVD<Matrix> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double top = std::sqrt(spec.cond);
  Vector sigma(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    sigma[j] = d == 1 ? top
                      : top - (top - 1.0) * static_cast<double>(j) /
                                  static_cast<double>(d - 1);
  }
  const Matrix Gt =
      svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose();

  std::vector<Matrix> A;
  std::vector<Vector> b;
  const auto M = static_cast<Eigen::Index>(spec.M);
  KeyedStream gb(spec.seed, StreamDomain::kProblem, 1);
  for (std::size_t i = 0; i < spec.n; ++i) {
    A.push_back(Gt.middleRows(static_cast<Eigen::Index>(i) * M, M));
    Vector bi = Vector::Zero(M);
    if (spec.random_rhs) {
      for (Eigen::Index r = 0; r < M; ++r) bi[r] = gb.normal();
    }
    b.push_back(std::move(bi));
  }

  Vector x0 = Vector::Zero(d);
  if (!spec.random_rhs) {
    KeyedStream gx(spec.seed, StreamDomain::kProblem, 2);
    for (Eigen::Index j = 0; j < d; ++j) x0[j] = gx.normal();
  }
  auto p = std::make_shared<LeastSquaresProblem>("least_squares", std::move(A),
                                                 std::move(b));
  p->set_initial_point(x0);
  p->set_delta((x0 - *p->minimizer()).squaredNorm());
  p->annotate("M", fmt::format("{}", spec.M));
  p->annotate("cond", spec.cond);
  p->annotate("seed", fmt::format("{}", spec.seed));
  p->annotate("rhs", spec.random_rhs ? "gaussian" : "zero");
  return p;
}

LibsvmData parse_libsvm(std::istream& is) {
  LibsvmData out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    char* end = nullptr;
    const double label = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
      throw Error(fmt::format("libsvm line {}: bad label '{}'", lineno, tok));
    }
    std::vector<std::pair<std::size_t, double>> row;
    while (ss >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0) {
        throw Error(fmt::format("libsvm line {}: bad feature '{}'", lineno, tok));
      }
      const std::string is_idx = tok.substr(0, colon);
      const std::string is_val = tok.substr(colon + 1);
      char* e1 = nullptr;
      const unsigned long long idx = std::strtoull(is_idx.c_str(), &e1, 10);
      char* e2 = nullptr;
      const double val = std::strtod(is_val.c_str(), &e2);
      if (e1 != is_idx.c_str() + is_idx.size() || idx == 0 ||
          is_val.empty() || e2 != is_val.c_str() + is_val.size()) {
        throw Error(fmt::format("libsvm line {}: bad feature '{}'", lineno, tok));
      }
      if (!row.empty() && idx <= row.back().first) {
        throw Error(fmt::format("libsvm line {}: indices not increasing", lineno));
      }
      row.emplace_back(static_cast<std::size_t>(idx), val);
      out.max_index = std::max(out.max_index, static_cast<std::size_t>(idx));
    }
    out.labels.push_back(label);
    out.rows.push_back(std::move(row));
  }
  return out;
}

void write_libsvm(std::ostream& os, const LibsvmData& data) {
  for (std::size_t r = 0; r < data.rows.size(); ++r) {
    os << format_double(data.labels[r]);
    for (auto [j, v] : data.rows[r]) os << ' ' << j << ':' << format_double(v);
    os << '\n';
  }
}

LogisticProblem::LogisticProblem(std::string name, std::vector<Matrix> A,
                                 std::vector<Vector> labels)
    : Problem(std::move(name), A.size(),
              A.empty() ? 1 : static_cast<std::size_t>(A[0].cols()),
              smoothness_bound(A), 0.0),
      A_(std::move(A)),
      y_(std::move(labels)) {
  for (std::size_t i = 0; i < A_.size(); ++i) {
    if (A_[i].rows() != y_[i].size() || A_[i].rows() == 0) {
      throw DimensionError("logistic block shape mismatch");
    }
  }
}

double LogisticProblem::smoothness_bound(const std::vector<Matrix>& A) {
  if (A.empty()) throw ConfigError("logistic needs n >= 1");
  double L = 0.0;
  for (const auto& a : A) {
    const Matrix g = a.transpose() * a;
    L = std::max(L, spectrum(g).lmax / (4.0 * static_cast<double>(a.rows())));
  }
  if (!(L > 0.0)) throw ConfigError("logistic data has all-zero features");
  return L;
}

std::size_t LogisticProblem::points_per_worker() const {
  return static_cast<std::size_t>(A_.front().rows());
}

double LogisticProblem::local_value(std::size_t i, const Vector& x) const {
  const Vector t = -(y_[i].array() * (A_[i] * x).array()).matrix();
  double s = 0.0;
  for (Eigen::Index m = 0; m < t.size(); ++m) s += softplus(t[m]);
  return s / static_cast<double>(t.size());
}

void LogisticProblem::local_gradient(std::size_t i, const Vector& x,
                                     Vector& out) const {
  const Vector z = A_[i] * x;
  Vector w(z.size());
  for (Eigen::Index m = 0; m < z.size(); ++m) {
    w[m] = -y_[i][m] * sigmoid(-y_[i][m] * z[m]);
  }
  out.noalias() = A_[i].transpose() * w;
  out /= static_cast<double>(z.size());
}

std::shared_ptr<LogisticProblem> make_logistic(const LibsvmData& data,
                                               std::size_t n,
                                               std::optional<std::size_t> M,
                                               std::string name) {
  if (n == 0) throw ConfigError("logistic needs n >= 1");
  const std::size_t per = M.value_or(data.rows.size() / n);
  if (per == 0 || per * n > data.rows.size()) {
    throw ConfigError(fmt::format(
        "libsvm data has {} points, fewer than n*M = {}*{}", data.rows.size(),
        n, per));
  }
  const auto d = static_cast<Eigen::Index>(data.max_index);
  std::vector<Matrix> A;
  std::vector<Vector> y;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(per), d);
    Vector yi(static_cast<Eigen::Index>(per));
    for (std::size_t m = 0; m < per; ++m) {
      const std::size_t r = i * per + m;
      for (auto [j, v] : data.rows[r]) {
        a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j - 1)) = v;
      }
      yi[static_cast<Eigen::Index>(m)] = data.labels[r] > 0.0 ? 1.0 : -1.0;
    }
    A.push_back(std::move(a));
    y.push_back(std::move(yi));
  }
  auto p = std::make_shared<LogisticProblem>(std::move(name), std::move(A),
                                             std::move(y));
  p->annotate("M", fmt::format("{}", per));
  p->annotate("points_total", fmt::format("{}", data.rows.size()));
  return p;
}

std::shared_ptr<LogisticProblem> load_libsvm(const std::string& path,
                                             std::size_t n,
                                             std::optional<std::size_t> M) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open libsvm file '" + path + "'");
  const LibsvmData data = parse_libsvm(in);
  auto p = make_logistic(data, n, M, "logistic");
  p->annotate("path", path);
  return p;
}

std::size_t attach_reference_optimum(Problem& problem,
                                     const ReferenceOptimumOptions& opts) {
  const auto d = static_cast<Eigen::Index>(problem.dim());
  if (opts.cache_path) {
    std::ifstream in(*opts.cache_path);
    if (in) {
      std::string line;
      std::optional<double> fs;
      Vector xs(d);
      bool have_x = false;
      while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        std::istringstream val(line.substr(eq + 1));
        if (key == "f_star") {
          double v;
          val >> v;
          fs = v;
        } else if (key == "x_star") {
          Eigen::Index j = 0;
          for (; j < d && (val >> xs[j]); ++j) {
          }
          have_x = j == d;
        }
      }
      if (fs && have_x) {
        problem.set_optimum(*fs, xs);
        problem.set_delta((problem.initial_point() - xs).squaredNorm());
        problem.annotate("f_star_source", "cache");
        return 0;
      }
    }
  }

  const double L = problem.smoothness();
  const double mu = problem.strong_convexity();
  const double mom =
      mu > 0.0 ? (std::sqrt(L / mu) - 1.0) / (std::sqrt(L / mu) + 1.0) : 0.0;
  Vector x = problem.initial_point();
  Vector x_prev = x;
  Vector y(d), g(d);
  Vector best = x;
  double best_f = problem.value(x);
  std::size_t it = 0;
  for (; it < opts.max_iters; ++it) {
    const double beta =
        mu > 0.0 ? mom
                 : static_cast<double>(it) / static_cast<double>(it + 3);
    y = x + beta * (x - x_prev);
    problem.gradient(y, g);
    x_prev = x;
    x = y - g / L;
    const double fx = problem.value(x);
    if (fx < best_f) {
      best_f = fx;
      best = x;
    }
    problem.gradient(x, g);
    if (g.norm() <= opts.grad_tol) {
      ++it;
      break;
    }
  }
  problem.set_optimum(best_f, best);
  problem.set_delta((problem.initial_point() - best).squaredNorm());
  problem.annotate("f_star_source", "reference_nesterov");
  problem.annotate("f_star_iterations", fmt::format("{}", it));
  if (opts.cache_path) {
    std::ofstream out(*opts.cache_path);
    out << "f_star=" << format_double(best_f) << '\n' << "x_star=";
    for (Eigen::Index j = 0; j < d; ++j) {
      out << (j ? " " : "") << format_double(best[j]);
    }
    out << '\n' << "iterations=" << it << '\n';
  }
  return it;
}

std::shared_ptr<ChainQuadratic> gen_constructed_quadratic(double mu, double L,
                                                          std::size_t d,
                                                          std::size_t n) {
  if (d % 2 != 0 || n % 2 != 0 || d == 0 || n == 0) {
    throw ConfigError("constructed quadratic needs even d and even n");
  }
  if (!(mu > 0.0) || L < mu) {
    throw ConfigError("constructed quadratic needs L >= mu > 0");
  }
  const double w = (L - mu) / 4.0;
  ChainTerms odd;
  odd.weight = w;
  odd.anchors = {0, d - 1};
  for (std::size_t r = 1; r + 1 <= d / 2; ++r) odd.links.emplace_back(2 * r - 1, 2 * r);
  if (w != 0.0) odd.linear = {{0, -2.0 * w}};
  ChainTerms even;
  even.weight = w;
  for (std::size_t r = 1; r <= d / 2; ++r) even.links.emplace_back(2 * r - 2, 2 * r - 1);
  std::vector<ChainTerms> workers;
  for (std::size_t i = 0; i < n; ++i) workers.push_back(i < n / 2 ? odd : even);
  return std::make_shared<ChainQuadratic>("constructed_quadratic", d, L, mu,
                                          mu, std::move(workers));
}

std::string to_string(HardFamily family) {
  switch (family) {
    case HardFamily::kScExample1:
      return "sc-example1";
    case HardFamily::kGcExample1:
      return "gc-example1";
    case HardFamily::kGcExample3:
      return "gc-example3";
    case HardFamily::kScHomogeneous:
      return "sc-homogeneous";
  }
  return "unknown";
}

double chain_decay_ratio(double kappa, std::size_t n) {
  return 1.0 -
         2.0 / (1.0 + std::sqrt(1.0 + 2.0 * (kappa - 1.0) /
                                          static_cast<double>(n)));
}

namespace {

// Rotated chain: worker i (1-based, i < n) owns links (nr+i, nr+i+1); worker
// n owns the anchor on coordinate 1, the links (nr, nr+1) for r >= 1 and the
// linear term. Links that leave the d coordinates become anchors when
// close_end is set and are dropped otherwise.
std::vector<ChainTerms> rotated_chain(std::size_t n, std::size_t d,
                                      double weight, double lambda,
                                      bool close_end) {
  std::vector<ChainTerms> workers(n);
  for (std::size_t i = 1; i <= n; ++i) {
    auto& t = workers[i - 1];
    t.weight = weight;
    std::size_t a = i == n ? n : i;
    if (i == n) t.anchors.push_back(0);
    for (; a <= d; a += n) {
      if (a + 1 <= d) {
        t.links.emplace_back(a - 1, a);
      } else if (close_end) {
        t.anchors.push_back(a - 1);
      }
    }
    if (i == n && weight != 0.0) t.linear = {{0, -2.0 * lambda * weight}};
  }
  return workers;
}

}  // namespace

HardInstance gen_zero_chain_sc(double L, double mu, std::size_t n,
                               std::size_t d, double delta,
                               std::optional<double> eps_target) {
  if (!(L > mu) || !(mu > 0.0) || n == 0 || d == 0 || !(delta > 0.0)) {
    throw ConfigError("sc-example1 needs L > mu > 0, n >= 1, d >= 1, delta > 0");
  }
  const double q = chain_decay_ratio(L / mu, n);
  const double lambda = std::sqrt((1.0 - q * q) * delta / (q * q));
  auto workers = rotated_chain(n, d, (L - mu) / 4.0, lambda, false);
  auto p = std::make_shared<ChainQuadratic>("sc-example1", d, L, mu, mu,
                                            std::move(workers));
  Vector closed(static_cast<Eigen::Index>(d));
  double qj = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    qj *= q;
    closed[static_cast<Eigen::Index>(j)] = lambda * qj;
  }
  p->annotate("family", "sc-example1");
  p->annotate("lambda", lambda);
  p->annotate("q", q);
  p->annotate("delta_target", delta);
  p->annotate("truncation_rel_error", std::abs(p->delta() - delta) / delta);
  if (eps_target) {
    const double deepest = 0.5 * mu * std::pow(q, 2.0 * static_cast<double>(d)) * delta;
    if (deepest > *eps_target) {
      p->annotate("warning", fmt::format(
                                 "d={} too small: floor at full progress {} "
                                 "exceeds eps_target {}",
                                 d, format_double(deepest),
                                 format_double(*eps_target)));
    }
  }
  return {p, HardFamily::kScExample1, lambda, q, closed};
}

HardInstance gen_zero_chain_gc(double L, std::size_t n, std::size_t d,
                               double delta) {
  if (!(L > 0.0) || n == 0 || d < 2 || !(delta > 0.0)) {
    throw ConfigError("gc-example1 needs L > 0, n >= 1, d >= 2, delta > 0");
  }
  const double lambda = std::sqrt(3.0 * delta / static_cast<double>(d));
  auto workers = rotated_chain(n, d, L / 4.0, lambda, true);
  auto p = std::make_shared<ChainQuadratic>("gc-example1", d, L, 0.0, 0.0,
                                            std::move(workers));
  Vector closed(static_cast<Eigen::Index>(d));
  for (std::size_t k = 1; k <= d; ++k) {
    closed[static_cast<Eigen::Index>(k - 1)] =
        lambda * (1.0 - static_cast<double>(k) / static_cast<double>(d + 1));
  }
  p->annotate("family", "gc-example1");
  p->annotate("lambda", lambda);
  p->annotate("delta_target", delta);
  return {p, HardFamily::kGcExample1, lambda, 0.0, closed};
}

HardInstance gen_zero_chain_gc3(double L, std::size_t n, std::size_t d,
                                double delta) {
  if (!(L > 0.0) || n == 0 || d == 0 || !(delta > 0.0)) {
    throw ConfigError("gc-example3 needs L > 0, n >= 1, d >= 1, delta > 0");
  }
  const double lambda = L * std::sqrt(delta / static_cast<double>(d));
  std::vector<ChainTerms> workers(n);
  for (std::size_t j = 0; j < d; ++j) {
    workers[n - 1].linear.emplace_back(j, static_cast<double>(n) * lambda);
  }
  auto p = std::make_shared<ChainQuadratic>("gc-example3", d, L, L, L,
                                            std::move(workers));
  p->annotate("family", "gc-example3");
  p->annotate("lambda", lambda);
  p->annotate("delta_target", delta);
  return {p, HardFamily::kGcExample3, lambda, 0.0,
          Vector::Constant(static_cast<Eigen::Index>(d), -lambda / L)};
}

HardInstance gen_sc_homogeneous(double L, double mu, std::size_t n,
                                std::size_t d, double delta) {
  if (!(L > mu) || !(mu > 0.0) || n == 0 || d == 0 || !(delta > 0.0)) {
    throw ConfigError("sc-homogeneous needs L > mu > 0, n >= 1, d >= 1");
  }
  const double q = chain_decay_ratio(L / mu, 1);
  const double lambda = std::sqrt((1.0 - q * q) * delta / (q * q));
  const auto single = rotated_chain(1, d, (L - mu) / 4.0, lambda, false);
  std::vector<ChainTerms> workers(n, single.front());
  auto p = std::make_shared<ChainQuadratic>("sc-homogeneous", d, L, mu, mu,
                                            std::move(workers));
  Vector closed(static_cast<Eigen::Index>(d));
  double qj = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    qj *= q;
    closed[static_cast<Eigen::Index>(j)] = lambda * qj;
  }
  p->annotate("family", "sc-homogeneous");
  p->annotate("lambda", lambda);
  p->annotate("q", q);
  p->annotate("delta_target", delta);
  return {p, HardFamily::kScHomogeneous, lambda, q, closed};
}

}  // namespace commsim
