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
#include "commsim/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>

#include <fmt/format.h>

#include "commsim/random.hpp"

namespace commsim {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::kStronglyConvex:
      return "strongly_convex";
    case Regime::kGenerallyConvex:
      return "generally_convex";
    case Regime::kManual:
      return "manual";
  }
  return "unknown";
}

RoundParams adiana_schedule_sc(double L, double mu, std::size_t n,
                               double omega) {
  if (!(omega > 0.0)) {
    throw ConfigError(
        "strongly convex schedule needs omega > 0; run identity compressors "
        "with a manual schedule instead");
  }
  if (!(mu > 0.0) || !(L >= mu) || n == 0) {
    throw ConfigError("strongly convex schedule needs L >= mu > 0 and n >= 1");
  }
  const double nn = static_cast<double>(n);
  RoundParams r;
  r.theta1 = 1.0 / (3.0 * std::sqrt(L / mu));
  r.theta2 = 1.0 / (3.0 * std::sqrt(nn) + 3.0 * nn / omega);
  r.eta = nn * r.theta2 / (120.0 * omega * L);
  r.alpha = 1.0 / (1.0 + omega);
  r.p = r.alpha;
  r.gamma = r.eta / (2.0 * r.theta1 + r.eta * mu);
  r.beta = 2.0 * r.theta1 / (2.0 * r.theta1 + r.eta * mu);
  return r;
}

RoundParams adiana_schedule_gc(double L, std::size_t n, double omega,
                               std::size_t k) {
  if (!(L > 0.0) || omega < 0.0 || n == 0) {
    throw ConfigError("generally convex schedule needs L > 0, omega >= 0");
  }
  const double w1 = 1.0 + omega;
  const double A = 27.0 * w1;
  const double kk = static_cast<double>(k);
  double eta = (kk + 1.0 + A) / (9.0 * w1 * w1 * (1.0 + A) * L);
  if (omega > 0.0) {
    eta = std::min(eta, 3.0 * static_cast<double>(n) / (200.0 * omega * w1 * L));
  }
  eta = std::min(eta, 1.0 / (2.0 * L));
  RoundParams r;
  r.eta = eta;
  r.theta1 = 9.0 / (kk + A);
  r.theta2 = 1.0 / (3.0 * w1);
  r.p = r.theta2;
  r.alpha = 1.0 / w1;
  r.beta = 1.0;
  r.gamma = eta / (2.0 * r.theta1);
  return r;
}

double Rule::at(std::size_t k) const {
  const double kk = static_cast<double>(k);
  switch (form) {
    case Form::kConstant:
      return a;
    case Form::kHyperbolic:
      return a / (kk + b);
    case Form::kRamp:
      return std::min((kk + a) / b, cap);
  }
  return a;
}

std::string Rule::describe() const {
  switch (form) {
    case Form::kConstant:
      return format_double(a);
    case Form::kHyperbolic:
      return fmt::format("{}/(k+{})", format_double(a), format_double(b));
    case Form::kRamp:
      return fmt::format("min((k+{})/{},{})", format_double(a),
                         format_double(b), format_double(cap));
  }
  return "";
}

Rule parse_rule(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  static const std::string num = R"(([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))";
  static const std::regex constant("^" + num + "$");
  static const std::regex hyper("^" + num + R"(/\(k\+)" + num + R"(\)$)");
  static const std::regex ramp(R"(^min\(\(k\+)" + num + R"(\)/)" + num + "," +
                               num + R"(\)$)");
  std::smatch m;
  if (std::regex_match(s, m, constant)) return Rule::constant(std::stod(m[1]));
  if (std::regex_match(s, m, hyper)) {
    return Rule::hyperbolic(std::stod(m[1]), std::stod(m[2]));
  }
  if (std::regex_match(s, m, ramp)) {
    return Rule::ramp(std::stod(m[1]), std::stod(m[2]), std::stod(m[3]));
  }
  throw ConfigError("cannot parse parameter rule '" + text + "'");
}

AdianaSchedule AdianaSchedule::strongly_convex(double L, double mu,
                                               std::size_t n, double omega) {
  AdianaSchedule s;
  s.regime_ = Regime::kStronglyConvex;
  s.sc_ = adiana_schedule_sc(L, mu, n, omega);
  s.L_ = L;
  s.mu_ = mu;
  s.n_ = n;
  s.omega_ = omega;
  return s;
}

AdianaSchedule AdianaSchedule::generally_convex(double L, std::size_t n,
                                                double omega) {
  AdianaSchedule s;
  s.regime_ = Regime::kGenerallyConvex;
  adiana_schedule_gc(L, n, omega, 0);
  s.L_ = L;
  s.n_ = n;
  s.omega_ = omega;
  return s;
}

AdianaSchedule AdianaSchedule::manual(const ManualParams& m, double mu,
                                      double omega) {
  AdianaSchedule s;
  s.regime_ = Regime::kManual;
  s.manual_ = m;
  s.mu_ = mu;
  s.omega_ = omega;
  return s;
}

RoundParams AdianaSchedule::at(std::size_t k) const {
  switch (regime_) {
    case Regime::kStronglyConvex:
      return sc_;
    case Regime::kGenerallyConvex:
      return adiana_schedule_gc(L_, n_, omega_, k);
    case Regime::kManual:
      break;
  }
  RoundParams r;
  r.eta = manual_.eta.at(k);
  r.theta1 = manual_.theta1.at(k);
  r.theta2 = manual_.theta2.at(k);
  r.p = manual_.p.at(k);
  r.alpha = manual_.alpha ? manual_.alpha->at(k) : 1.0 / (1.0 + omega_);
  const double den = 2.0 * r.theta1 + r.eta * mu_;
  r.beta = manual_.beta ? manual_.beta->at(k) : 2.0 * r.theta1 / den;
  r.gamma = manual_.gamma ? manual_.gamma->at(k) : r.eta / den;
  return r;
}

void AdianaSchedule::validate(const RoundParams& r, double L) const {
  auto fail = [&](const std::string& what) {
    throw ConfigError("schedule invariant violated: " + what);
  };
  if (!(r.theta1 > 0.0 && r.theta1 < 1.0)) fail(fmt::format("theta1={} not in (0,1)", r.theta1));
  if (!(r.theta2 > 0.0 && r.theta2 < 1.0)) fail(fmt::format("theta2={} not in (0,1)", r.theta2));
  if (!(r.theta1 + r.theta2 < 1.0)) fail("theta1 + theta2 >= 1");
  if (!(r.eta > 0.0)) fail(fmt::format("eta={} not positive", r.eta));
  if (regime_ != Regime::kManual && r.eta > (1.0 + 1e-12) / (2.0 * L)) {
    fail(fmt::format("eta={} exceeds 1/(2L)", r.eta));
  }
  if (!(r.alpha > 0.0 && r.alpha <= 1.0)) fail(fmt::format("alpha={} not in (0,1]", r.alpha));
  if (!(r.p > 0.0 && r.p <= 1.0)) fail(fmt::format("p={} not in (0,1]", r.p));
  if (!(r.gamma > 0.0)) fail(fmt::format("gamma={} not positive", r.gamma));
  if (!(r.beta >= 0.0 && r.beta <= 1.0)) fail(fmt::format("beta={} not in [0,1]", r.beta));
}

std::string AdianaSchedule::describe() const {
  if (regime_ == Regime::kManual) {
    std::string s = fmt::format("manual eta={} theta1={} theta2={} p={}",
                                manual_.eta.describe(), manual_.theta1.describe(),
                                manual_.theta2.describe(), manual_.p.describe());
    if (manual_.alpha) s += " alpha=" + manual_.alpha->describe();
    return s;
  }
  return to_string(regime_);
}

CanitaValues canita_schedule(double L, std::size_t n, double omega,
                             std::size_t t) {
  if (n == 0 || omega < 0.0 || !(L > 0.0)) {
    throw ConfigError("canita schedule needs n >= 1, omega >= 0, L > 0");
  }
  const double nn = static_cast<double>(n);
  const double w1 = 1.0 + omega;
  CanitaValues v;
  v.b = std::min(omega, std::sqrt(omega * w1 * w1 / nn));
  const double S = 1.0 + v.b + omega;
  v.beta0 = 9.0 * S * S / (2.0 * (1.0 + v.b));
  v.p = 1.0 / (1.0 + v.b);
  v.alpha = 1.0 / w1;
  v.theta = 3.0 * (1.0 + v.b) / (static_cast<double>(t) + 9.0 * S);
  v.beta = 48.0 * omega * w1 * (1.0 + v.b + 2.0 * w1) / (nn * (1.0 + v.b) * (1.0 + v.b));
  const double cap = 1.0 / (L * (v.beta + 1.5));
  double eta = 1.0 / (L * (v.beta0 + 1.5));
  for (std::size_t s = 1; s <= t; ++s) {
    eta = std::min((1.0 + 1.0 / (static_cast<double>(s) + 9.0 * S)) * eta, cap);
  }
  v.eta = eta;
  return v;
}

double canita_eta_floor(double L, std::size_t n, double omega, std::size_t T) {
  const CanitaValues v = canita_schedule(L, n, omega, 0);
  const double S = 1.0 + v.b + omega;
  return std::min((static_cast<double>(T) + 1.0 + 9.0 * S) * (1.0 + v.b) /
                      (60.0 * L * S * S * S),
                  1.0 / (L * (v.beta + 1.5)));
}

std::size_t default_checkpoint_every(const Problem& problem) {
  return problem.dim() * problem.workers() <= 100000 ? 1 : 10;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  return splitmix64_mix(splitmix64_mix(seed) ^
                        (static_cast<std::uint64_t>(trial) + 0x2545f4914f6cdd1dULL));
}

AdianaState AdianaState::initial(const Problem& problem, ShiftInit init) {
  AdianaState s;
  const Vector& x0 = problem.initial_point();
  s.x = s.y = s.z = s.w = x0;
  const auto d = static_cast<Eigen::Index>(problem.dim());
  s.h_local.assign(problem.workers(), Vector::Zero(d));
  s.h = Vector::Zero(d);
  if (init == ShiftInit::kGradient) {
    for (std::size_t i = 0; i < problem.workers(); ++i) {
      problem.local_gradient(i, x0, s.h_local[i]);
      s.h += s.h_local[i];
    }
    s.h /= static_cast<double>(problem.workers());
  }
  return s;
}

void AdianaWorkspace::resize(std::size_t n, std::size_t d) {
  const auto dd = static_cast<Eigen::Index>(d);
  m.assign(n, Vector::Zero(dd));
  c.assign(n, Vector::Zero(dd));
  scratch.assign(n, Vector::Zero(dd));
  bits.assign(n, 0.0);
  g = Vector::Zero(dd);
}

double adiana_round(AdianaState& s, const Problem& problem,
                    const Compressor& comp, const AdianaSchedule& sched,
                    Execution ex, AdianaWorkspace& ws) {
  const std::size_t n = problem.workers();
  const std::size_t k = s.round;
  const RoundParams r = sched.at(k);
  sched.validate(r, problem.smoothness());
  if (ws.m.size() != n) ws.resize(n, problem.dim());

  s.x = r.theta1 * s.z + r.theta2 * s.w + (1.0 - r.theta1 - r.theta2) * s.y;
  for_each_worker(ex, n, [&](std::size_t i) {
    Vector& tmp = ws.scratch[i];
    problem.local_gradient(i, s.x, tmp);
    tmp -= s.h_local[i];
    double b = comp.compress(i, k, 0, tmp, ws.m[i]);
    problem.local_gradient(i, s.w, tmp);
    tmp -= s.h_local[i];
    b += comp.compress(i, k, 1, tmp, ws.c[i]);
    s.h_local[i] += r.alpha * ws.c[i];
    ws.bits[i] = b;
  });
  Vector mbar, cbar;
  tree_mean_inplace(ws.m, mbar);
  tree_mean_inplace(ws.c, cbar);
  ws.g = s.h + mbar;
  s.h += r.alpha * cbar;
  Vector y_next = s.x - r.eta * ws.g;
  s.z = r.beta * s.z + (1.0 - r.beta) * s.x + (r.gamma / r.eta) * (y_next - s.x);
  KeyedStream server(comp.seed(), StreamDomain::kServer, 0, k, 0);
  if (server.bernoulli(r.p)) s.w = s.y;
  s.y = std::move(y_next);
  ++s.round;
  return tree_sum(ws.bits) / static_cast<double>(n);
}

const Vector& adiana_output(const AdianaState& s, const Problem& problem) {
  return problem.value(s.w) <= problem.value(s.y) ? s.w : s.y;
}

double lyapunov_lambda(const RoundParams& r) {
  const double a = r.p - r.theta1 - r.theta2;
  return r.gamma * r.beta / (r.p * r.theta1) *
         (-a + std::sqrt(a * a + 4.0 * r.p * r.theta2));
}

double lyapunov(const AdianaState& s, const RoundParams& r,
                const Problem& problem, double omega) {
  if (!problem.minimizer() || !problem.has_optimum()) {
    throw Error("lyapunov needs a known minimizer and optimal value");
  }
  const Vector& xs = *problem.minimizer();
  const double W = problem.gap(s.w);
  const double Y = problem.gap(s.y);
  const double Z = (s.z - xs).squaredNorm();
  const std::size_t n = problem.workers();
  double H = 0.0;
  Vector g;
  for (std::size_t i = 0; i < n; ++i) {
    problem.local_gradient(i, s.w, g);
    H += (s.h_local[i] - g).squaredNorm();
  }
  H /= static_cast<double>(n);
  const double gb = r.gamma * r.beta;
  return lyapunov_lambda(r) * W + 2.0 * gb / r.theta1 * Y + Z +
         10.0 * r.eta * omega * (1.0 + omega) * gb /
             (r.theta1 * static_cast<double>(n)) * H;
}

namespace {

// Records checkpoints and flags divergence.
class Recorder {
 public:
  Recorder(const Problem& problem, TraceMeta meta, const RunOptions& opts)
      : problem_(problem),
        trace_(std::move(meta)),
        every_(opts.checkpoint_every.value_or(default_checkpoint_every(problem))),
        rounds_(opts.rounds) {
    if (every_ == 0) throw ConfigError("checkpoint interval must be >= 1");
  }

  bool due(std::size_t k) const { return k % every_ == 0 || k == rounds_; }

  // False once the run diverged.
  bool record(std::size_t k, double bits, const Vector& xhat,
              std::optional<double> lyap = std::nullopt) {
    const double sub = problem_.gap(xhat);
    if (!std::isfinite(sub) || sub > kDivergenceThreshold) {
      trace_.mark_diverged(k);
      return false;
    }
    trace_.record(k, bits, sub, lyap);
    return true;
  }

  Trace take() { return std::move(trace_); }

 private:
  const Problem& problem_;
  Trace trace_;
  std::size_t every_;
  std::size_t rounds_;
};

TraceMeta make_meta(const std::string& algo, const std::string& comp,
                    double omega, const Problem& p, const RunOptions& o) {
  return {algo, comp, omega, p.workers(), p.dim(), o.seed, o.trial};
}

}  // namespace

Trace run_adiana(const Problem& problem, const CompressorSpec& spec,
                 const AdianaSchedule& sched, const RunOptions& opts,
                 const AdianaObserver& observer) {
  if (spec.dim != problem.dim()) {
    throw DimensionError("compressor dimension does not match the problem");
  }
  const Compressor comp(spec, trial_seed(opts.seed, opts.trial));
  const double omega = spec.omega();
  AdianaState s = AdianaState::initial(problem, opts.shift_init);
  AdianaWorkspace ws;
  ws.resize(problem.workers(), problem.dim());
  Recorder rec(problem, make_meta("adiana", spec.id(), omega, problem, opts), opts);

  auto checkpoint = [&](std::size_t k, double bits) {
    const Vector& xh = adiana_output(s, problem);
    std::optional<double> lyap;
    if (opts.track_lyapunov) lyap = lyapunov(s, sched.at(k), problem, omega);
    if (!rec.record(k, bits, xh, lyap)) return false;
    if (observer) observer(k, s, xh);
    return true;
  };

  double bits = 0.0;
  if (checkpoint(0, bits)) {
    for (std::size_t k = 1; k <= opts.rounds; ++k) {
      bits += adiana_round(s, problem, comp, sched, opts.execution, ws);
      if (rec.due(k) && !checkpoint(k, bits)) break;
    }
  }
  return rec.take();
}

Trace run_diana(const Problem& problem, const CompressorSpec& spec,
                double gamma, std::optional<double> alpha,
                const RunOptions& opts) {
  if (spec.dim != problem.dim()) {
    throw DimensionError("compressor dimension does not match the problem");
  }
  const double omega = spec.omega();
  const double a = alpha.value_or(1.0 / (1.0 + omega));
  if (!(a > 0.0) || a > (1.0 + 1e-12) / (1.0 + omega)) {
    throw ConfigError(fmt::format("diana needs 0 < alpha <= 1/(1+omega), got {}", a));
  }
  if (!(gamma > 0.0)) throw ConfigError("diana needs gamma > 0");
  const Compressor comp(spec, trial_seed(opts.seed, opts.trial));
  const std::size_t n = problem.workers();
  const auto d = static_cast<Eigen::Index>(problem.dim());

  AdianaState init = AdianaState::initial(problem, opts.shift_init);
  std::vector<Vector> h_local = std::move(init.h_local);
  Vector h = std::move(init.h);
  Vector x = problem.initial_point();
  std::vector<Vector> m(n, Vector::Zero(d)), scratch(n, Vector::Zero(d));
  std::vector<double> bits_i(n, 0.0);
  Vector mbar;
  Recorder rec(problem, make_meta("diana", spec.id(), omega, problem, opts), opts);

  double bits = 0.0;
  if (rec.record(0, bits, x)) {
    for (std::size_t k = 1; k <= opts.rounds; ++k) {
      const std::size_t round = k - 1;
      for_each_worker(opts.execution, n, [&](std::size_t i) {
        problem.local_gradient(i, x, scratch[i]);
        scratch[i] -= h_local[i];
        bits_i[i] = comp.compress(i, round, 0, scratch[i], m[i]);
        h_local[i] += a * m[i];
      });
      tree_mean_inplace(m, mbar);
      x -= gamma * (h + mbar);
      h += a * mbar;
      bits += tree_sum(bits_i) / static_cast<double>(n);
      if (rec.due(k) && !rec.record(k, bits, x)) break;
    }
  }
  return rec.take();
}

Trace run_ef21(const Problem& problem, const CompressorSpec& spec,
               double gamma, const RunOptions& opts) {
  if (spec.kind == CompressorKind::kRandomS) {
    throw ConfigError("ef21 takes the unscaled random_s operator, not random_s");
  }
  if (spec.dim != problem.dim()) {
    throw DimensionError("compressor dimension does not match the problem");
  }
  if (!(gamma > 0.0)) throw ConfigError("ef21 needs gamma > 0");
  const Compressor comp(spec, trial_seed(opts.seed, opts.trial));
  const std::size_t n = problem.workers();
  const auto d = static_cast<Eigen::Index>(problem.dim());

  std::vector<Vector> g_local(n, Vector::Zero(d)), m(n, Vector::Zero(d)),
      scratch(n, Vector::Zero(d));
  std::vector<double> bits_i(n, 0.0);
  Vector g = Vector::Zero(d), mbar;
  Vector x = problem.initial_point();
  Recorder rec(problem, make_meta("ef21", spec.id(), spec.omega(), problem, opts),
               opts);

  // Round 1 transmits g_i = C(grad f_i(x0)) from g_i = 0, which is the
  // usual initialization; later rounds send the compressed correction.
  double bits = 0.0;
  if (rec.record(0, bits, x)) {
    for (std::size_t k = 1; k <= opts.rounds; ++k) {
      const std::size_t round = k - 1;
      for_each_worker(opts.execution, n, [&](std::size_t i) {
        problem.local_gradient(i, x, scratch[i]);
        scratch[i] -= g_local[i];
        bits_i[i] = comp.compress(i, round, 0, scratch[i], m[i]);
        g_local[i] += m[i];
      });
      tree_mean_inplace(m, mbar);
      g += mbar;
      x -= gamma * g;
      bits += tree_sum(bits_i) / static_cast<double>(n);
      if (rec.due(k) && !rec.record(k, bits, x)) break;
    }
  }
  return rec.take();
}

Trace run_nesterov(const Problem& problem, double eta, double theta,
                   const RunOptions& opts) {
  if (!(eta > 0.0)) throw ConfigError("nesterov needs eta > 0");
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("nesterov needs theta in (0,1]");
  const auto d = static_cast<Eigen::Index>(problem.dim());
  const double per_round = 64.0 * static_cast<double>(problem.dim());
  Vector x = problem.initial_point();
  Vector z = x, y(d), g(d), x_next(d);
  Recorder rec(problem, make_meta("nesterov", "identity", 0.0, problem, opts), opts);

  double bits = 0.0;
  if (rec.record(0, bits, x)) {
    for (std::size_t k = 1; k <= opts.rounds; ++k) {
      y = (1.0 - theta) * x + theta * z;
      problem.gradient(y, g);
      x_next = y - eta * g;
      z = x + (x_next - x) / theta;
      x.swap(x_next);
      bits += per_round;
      if (rec.due(k) && !rec.record(k, bits, x)) break;
    }
  }
  return rec.take();
}

}  // namespace commsim
