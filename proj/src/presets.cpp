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
#include "commsim/presets.hpp"

#include <sstream>

namespace commsim {

namespace {

Preset adiana(std::string name, std::string problem, std::string comp, Rule eta,
              Rule theta1, double theta2, double p) {
  Preset s;
  s.name = std::move(name);
  s.algorithm = "adiana";
  s.problem = std::move(problem);
  s.compressor = std::move(comp);
  ManualParams m;
  m.eta = eta;
  m.theta1 = theta1;
  m.theta2 = Rule::constant(theta2);
  m.p = Rule::constant(p);
  s.adiana = m;
  return s;
}

Preset stepped(std::string name, std::string algo, std::string problem,
               std::string comp, double gamma) {
  Preset s;
  s.name = std::move(name);
  s.algorithm = std::move(algo);
  s.problem = std::move(problem);
  s.compressor = std::move(comp);
  s.gamma = gamma;
  return s;
}

Preset nesterov(std::string name, std::string problem, double eta,
                double theta) {
  Preset s;
  s.name = std::move(name);
  s.algorithm = "nesterov";
  s.problem = std::move(problem);
  s.compressor = "identity";
  s.eta = eta;
  s.theta = theta;
  return s;
}

std::vector<Preset> build() {
  using R = Rule;
  const auto c = [](double v) { return R::constant(v); };
  std::vector<Preset> v;

  // Constructed quadratic. The published Nesterov pair diverges as printed
  // (eta*L = 1400); the two values are used swapped.
  v.push_back(nesterov("fig1-nesterov", "constructed", 1.2e-4, 1.4e-1));
  v.push_back(adiana("fig1-adiana-id-rand1", "constructed", "random_s:1", c(1.5e-4), c(1.8e-1), 1.3e-1, 1.5e-1));
  v.push_back(adiana("fig1-adiana-id-rand2", "constructed", "random_s:2", c(1.5e-4), c(1.5e-4), 5.0e-2, 1.9e-1));
  v.push_back(adiana("fig1-adiana-id-rand4", "constructed", "random_s:4", c(1.3e-4), c(9.2e-2), 5.0e-2, 2.3e-1));
  v.push_back(adiana("fig1-adiana-sd-rand1", "constructed", "random_s:1:shared", c(1.4e-6), c(2.0e-2), 1.6e-1, 2.7e-2));
  v.push_back(adiana("fig1-adiana-sd-rand2", "constructed", "random_s:2:shared", c(9.6e-6), c(7.0e-2), 4.3e-1, 1.8e-1));
  v.push_back(adiana("fig1-adiana-sd-rand4", "constructed", "random_s:4:shared", c(1.6e-5), c(6.0e-2), 2.1e-1, 1.6e-1));

  // Synthetic least squares.
  v.push_back(nesterov("ls-nesterov", "least_squares", 3.0e-2, 1.4e-2));
  v.push_back(adiana("ls-adiana-rs", "least_squares", "random_s:d/20", c(4.8e-2), c(2.2e-2), 7.6e-2, 4.1e-2));
  v.push_back(adiana("ls-adiana-nc", "least_squares", "natural", c(3.9e-2), c(1.0e-2), 2.9e-1, 9.9e-1));
  v.push_back(adiana("ls-adiana-rq", "least_squares", "quantize", c(6.5e-2), c(1.4e-2), 2.7e-1, 5.5e-1));
  v.push_back(stepped("ls-diana-rs", "diana", "least_squares", "random_s:d/20", 7.9e-2));
  v.push_back(stepped("ls-diana-nc", "diana", "least_squares", "natural", 7.4e-2));
  v.push_back(stepped("ls-diana-rq", "diana", "least_squares", "quantize", 7.6e-2));
  v.push_back(stepped("ls-ef21-rs", "ef21", "least_squares", "unscaled_random_s:d/20", 6.2e-2));
  v.push_back(stepped("ls-ef21-nc", "ef21", "least_squares", "natural", 6.8e-2));
  v.push_back(stepped("ls-ef21-rq", "ef21", "least_squares", "quantize", 7.4e-2));

  // a9a logistic regression.
  v.push_back(nesterov("a9a-nesterov", "a9a", 0.94, 0.17));
  v.push_back(adiana("a9a-adiana-rs", "a9a", "random_s:d/20", c(2.1), R::hyperbolic(13, 520), 0.21, 0.77));
  v.push_back(adiana("a9a-adiana-nc", "a9a", "natural", c(2.1), R::hyperbolic(1.0, 4.3), 8.0e-3, 0.80));
  v.push_back(adiana("a9a-adiana-rq", "a9a", "quantize", c(2.2), R::hyperbolic(1.3, 1.3), 0.15, 0.85));
  v.push_back(stepped("a9a-diana-rs", "diana", "a9a", "random_s:d/20", 0.94));
  v.push_back(stepped("a9a-diana-nc", "diana", "a9a", "natural", 2.6));
  v.push_back(stepped("a9a-diana-rq", "diana", "a9a", "quantize", 0.47));
  v.push_back(stepped("a9a-ef21-rs", "ef21", "a9a", "unscaled_random_s:d/20", 1.3));
  v.push_back(stepped("a9a-ef21-nc", "ef21", "a9a", "natural", 1.6));
  v.push_back(stepped("a9a-ef21-rq", "ef21", "a9a", "quantize", 2.7));

  // w8a logistic regression.
  v.push_back(nesterov("w8a-nesterov", "w8a", 15, 0.94));
  v.push_back(adiana("w8a-adiana-rs", "w8a", "random_s:d/20", R::ramp(410, 120, 15), R::hyperbolic(8.8, 480), 2.4e-2, 0.36));
  v.push_back(adiana("w8a-adiana-nc", "w8a", "natural", c(15), R::hyperbolic(2.5, 11), 0.67, 0.83));
  v.push_back(adiana("w8a-adiana-rq", "w8a", "quantize", c(15), R::hyperbolic(1.9, 7.4), 0.42, 0.99));
  v.push_back(stepped("w8a-diana-rs", "diana", "w8a", "random_s:d/20", 15));
  v.push_back(stepped("w8a-diana-nc", "diana", "w8a", "natural", 16));
  v.push_back(stepped("w8a-diana-rq", "diana", "w8a", "quantize", 15));
  v.push_back(stepped("w8a-ef21-rs", "ef21", "w8a", "unscaled_random_s:d/20", 20));
  v.push_back(stepped("w8a-ef21-nc", "ef21", "w8a", "natural", 15));
  v.push_back(stepped("w8a-ef21-rq", "ef21", "w8a", "quantize", 15));
  return v;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = build();
  return table;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

CompressorSpec resolve_compressor_hint(const std::string& hint, std::size_t d) {
  std::vector<std::string> parts;
  std::stringstream ss(hint);
  for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
  if (parts.empty()) throw ConfigError("empty compressor hint");
  Randomness mode = Randomness::kIndependent;
  if (parts.size() > 1 && (parts.back() == "shared" || parts.back() == "independent")) {
    mode = parse_randomness(parts.back());
    parts.pop_back();
  }
  const CompressorKind kind = parse_compressor_kind(parts[0]);
  auto size_arg = [&]() -> std::size_t {
    if (parts.size() < 2) throw ConfigError("compressor hint '" + hint + "' needs s");
    if (parts[1] == "d/20") return std::max<std::size_t>(1, d / 20);
    return static_cast<std::size_t>(std::stoul(parts[1]));
  };
  switch (kind) {
    case CompressorKind::kIdentity:
      return CompressorSpec::identity(d);
    case CompressorKind::kRandomS:
      return CompressorSpec::random_s(d, size_arg(), mode);
    case CompressorKind::kUnscaledRandomS:
      return CompressorSpec::unscaled_random_s(d, size_arg(), mode);
    case CompressorKind::kNatural:
      return CompressorSpec::natural(d, mode);
    case CompressorKind::kQuantize:
      return CompressorSpec::quantize(d, parts.size() > 1 ? std::stoul(parts[1]) : 0, mode);
  }
  throw ConfigError("bad compressor hint '" + hint + "'");
}

}  // namespace commsim
