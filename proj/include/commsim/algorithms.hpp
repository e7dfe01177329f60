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
#ifndef COMMSIM_ALGORITHMS_HPP_
#define COMMSIM_ALGORITHMS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "commsim/compressors.hpp"
#include "commsim/core.hpp"
#include "commsim/kernels.hpp"

namespace commsim {

enum class Regime { kStronglyConvex, kGenerallyConvex, kManual };

std::string to_string(Regime r);

struct RoundParams {
  double eta = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double p = 0.0;
};

RoundParams adiana_schedule_sc(double L, double mu, std::size_t n,
                               double omega);
RoundParams adiana_schedule_gc(double L, std::size_t n, double omega,
                               std::size_t k);

// Scalar parameter as a function of the round index.
struct Rule {
  enum class Form { kConstant, kHyperbolic, kRamp };
  Form form = Form::kConstant;
  double a = 0.0;
  double b = 0.0;
  double cap = 0.0;

  // a
  static Rule constant(double v) { return {Form::kConstant, v, 0.0, 0.0}; }
  // a / (k + b)
  static Rule hyperbolic(double a, double b) {
    return {Form::kHyperbolic, a, b, 0.0};
  }
  // min{(k + a) / b, cap}
  static Rule ramp(double a, double b, double cap) {
    return {Form::kRamp, a, b, cap};
  }

  double at(std::size_t k) const;
  std::string describe() const;
};

// "0.5", "13/(k+520)", "min((k+410)/120,15)".
Rule parse_rule(const std::string& s);

struct ManualParams {
  Rule eta;
  Rule theta1;
  Rule theta2;
  Rule p;
  std::optional<Rule> alpha;  // default 1/(1+omega)
  std::optional<Rule> beta;   // default 2 theta1 / (2 theta1 + eta mu)
  std::optional<Rule> gamma;  // default eta / (2 theta1 + eta mu)
};

class AdianaSchedule {
 public:
  static AdianaSchedule strongly_convex(double L, double mu, std::size_t n,
                                        double omega);
  static AdianaSchedule generally_convex(double L, std::size_t n,
                                         double omega);
  static AdianaSchedule manual(const ManualParams& m, double mu, double omega);

  Regime regime() const { return regime_; }
  RoundParams at(std::size_t k) const;
  // Throws ConfigError naming the violated condition. The eta <= 1/(2L)
  // cap only applies to the closed-form regimes.
  void validate(const RoundParams& r, double L) const;
  std::string describe() const;

 private:
  Regime regime_ = Regime::kManual;
  double L_ = 0.0;
  double mu_ = 0.0;
  std::size_t n_ = 1;
  double omega_ = 0.0;
  RoundParams sc_;
  ManualParams manual_;
};

struct CanitaValues {
  double b = 0.0;
  double beta0 = 0.0;
  double p = 0.0;
  double alpha = 0.0;
  double theta = 0.0;
  double beta = 0.0;
  double eta = 0.0;
};

CanitaValues canita_schedule(double L, std::size_t n, double omega,
                             std::size_t t);
double canita_eta_floor(double L, std::size_t n, double omega, std::size_t T);

enum class ShiftInit { kZero, kGradient };

struct RunOptions {
  std::size_t rounds = 1000;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  Execution execution = Execution::kSerial;
  bool track_lyapunov = false;
  std::optional<std::size_t> checkpoint_every;
  ShiftInit shift_init = ShiftInit::kZero;
};

// Every round when d*n <= 1e5, else every 10 rounds.
std::size_t default_checkpoint_every(const Problem& problem);
// Compressor master seed of one trial.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

struct AdianaState {
  Vector x, y, z, w, h;
  std::vector<Vector> h_local;
  std::size_t round = 0;

  static AdianaState initial(const Problem& problem, ShiftInit init);
};

struct AdianaWorkspace {
  std::vector<Vector> m, c, scratch;
  std::vector<double> bits;
  Vector g;

  void resize(std::size_t n, std::size_t d);
};

// One round of the accelerated loop; returns the per-worker bits of the
// round averaged over workers.
double adiana_round(AdianaState& s, const Problem& problem,
                    const Compressor& comp, const AdianaSchedule& sched,
                    Execution ex, AdianaWorkspace& ws);

// w if f(w) <= f(y), else y.
const Vector& adiana_output(const AdianaState& s, const Problem& problem);

double lyapunov_lambda(const RoundParams& r);
double lyapunov(const AdianaState& s, const RoundParams& r,
                const Problem& problem, double omega);

using AdianaObserver =
    std::function<void(std::size_t k, const AdianaState&, const Vector& xhat)>;

Trace run_adiana(const Problem& problem, const CompressorSpec& spec,
                 const AdianaSchedule& sched, const RunOptions& opts,
                 const AdianaObserver& observer = {});

Trace run_diana(const Problem& problem, const CompressorSpec& spec,
                double gamma, std::optional<double> alpha,
                const RunOptions& opts);

// spec must not be the scaled random_s operator.
Trace run_ef21(const Problem& problem, const CompressorSpec& spec,
               double gamma, const RunOptions& opts);

Trace run_nesterov(const Problem& problem, double eta, double theta,
                   const RunOptions& opts);

}  // namespace commsim

#endif  // COMMSIM_ALGORITHMS_HPP_
