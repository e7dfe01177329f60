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
#include "commsim/compressors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

#include "commsim/elias.hpp"

namespace commsim {

std::string to_string(CompressorKind kind) {
  switch (kind) {
    case CompressorKind::kIdentity:
      return "identity";
    case CompressorKind::kRandomS:
      return "random_s";
    case CompressorKind::kUnscaledRandomS:
      return "unscaled_random_s";
    case CompressorKind::kNatural:
      return "natural";
    case CompressorKind::kQuantize:
      return "quantize";
  }
  return "unknown";
}

std::string to_string(Randomness r) {
  return r == Randomness::kShared ? "shared" : "independent";
}

CompressorKind parse_compressor_kind(const std::string& s) {
  if (s == "identity") return CompressorKind::kIdentity;
  if (s == "random_s" || s == "rand") return CompressorKind::kRandomS;
  if (s == "unscaled_random_s") return CompressorKind::kUnscaledRandomS;
  if (s == "natural") return CompressorKind::kNatural;
  if (s == "quantize") return CompressorKind::kQuantize;
  throw ConfigError("unknown compressor kind '" + s + "'");
}

Randomness parse_randomness(const std::string& s) {
  if (s == "independent" || s == "id") return Randomness::kIndependent;
  if (s == "shared" || s == "sd") return Randomness::kShared;
  throw ConfigError("unknown randomness mode '" + s + "'");
}

CompressorSpec CompressorSpec::identity(std::size_t d) {
  CompressorSpec c;
  c.kind = CompressorKind::kIdentity;
  c.dim = d;
  c.validate();
  return c;
}

CompressorSpec CompressorSpec::random_s(std::size_t d, std::size_t s,
                                        Randomness r) {
  CompressorSpec c;
  c.kind = CompressorKind::kRandomS;
  c.dim = d;
  c.s = s;
  c.randomness = r;
  c.validate();
  return c;
}

CompressorSpec CompressorSpec::unscaled_random_s(std::size_t d, std::size_t s,
                                                 Randomness r) {
  CompressorSpec c = random_s(d, s, r);
  c.kind = CompressorKind::kUnscaledRandomS;
  return c;
}

CompressorSpec CompressorSpec::natural(std::size_t d, Randomness r) {
  CompressorSpec c;
  c.kind = CompressorKind::kNatural;
  c.dim = d;
  c.randomness = r;
  c.validate();
  return c;
}

CompressorSpec CompressorSpec::quantize(std::size_t d, std::size_t levels,
                                        Randomness r) {
  CompressorSpec c;
  c.kind = CompressorKind::kQuantize;
  c.dim = d;
  c.s = levels == 0
            ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))))
            : levels;
  c.randomness = r;
  c.validate();
  return c;
}

void CompressorSpec::validate() const {
  if (dim == 0) throw ConfigError("compressor dimension must be >= 1");
  if (raw_bits < 1) throw ConfigError("compressor raw_bits must be >= 1");
  switch (kind) {
    case CompressorKind::kRandomS:
    case CompressorKind::kUnscaledRandomS:
      if (s < 1 || s > dim) {
        throw ConfigError(
            fmt::format("random_s needs 1 <= s <= d (s={}, d={})", s, dim));
      }
      break;
    case CompressorKind::kQuantize:
      if (s < 1) throw ConfigError("quantize needs at least one level");
      break;
    default:
      break;
  }
}

double CompressorSpec::omega() const {
  const double d = static_cast<double>(dim);
  switch (kind) {
    case CompressorKind::kIdentity:
      return 0.0;
    case CompressorKind::kRandomS:
    case CompressorKind::kUnscaledRandomS:
      return d / static_cast<double>(s) - 1.0;
    case CompressorKind::kNatural:
      return 1.0 / 8.0;
    case CompressorKind::kQuantize: {
      const double sq = static_cast<double>(s);
      return std::min(d / (sq * sq), std::sqrt(d) / sq);
    }
  }
  return 0.0;
}

std::optional<double> CompressorSpec::fixed_bits() const {
  const double d = static_cast<double>(dim);
  switch (kind) {
    case CompressorKind::kIdentity:
      return raw_bits * d;
    case CompressorKind::kRandomS:
    case CompressorKind::kUnscaledRandomS:
      return random_s_bits(dim, s, raw_bits);
    case CompressorKind::kNatural:
      return 12.0 * d;
    case CompressorKind::kQuantize:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string CompressorSpec::id() const {
  const char* mode = randomness == Randomness::kShared ? "sd" : "id";
  switch (kind) {
    case CompressorKind::kIdentity:
      return "identity";
    case CompressorKind::kRandomS:
      return fmt::format("rand-{}-{}", s, mode);
    case CompressorKind::kUnscaledRandomS:
      return fmt::format("urand-{}-{}", s, mode);
    case CompressorKind::kNatural:
      return fmt::format("natural-{}", mode);
    case CompressorKind::kQuantize:
      return fmt::format("quantize-{}-{}", s, mode);
  }
  return "unknown";
}

std::uint64_t index_set_bits(std::size_t d, std::size_t s) {
  if (s > d) throw ConfigError("index_set_bits needs s <= d");
  using boost::multiprecision::cpp_int;
  cpp_int c = 1;
  for (std::size_t i = 0; i < s; ++i) {
    c *= d - i;
    c /= i + 1;
  }
  if (c == 1) return 0;
  return static_cast<std::uint64_t>(boost::multiprecision::msb(cpp_int(c - 1))) + 1;
}

double random_s_bits(std::size_t d, std::size_t s, int r) {
  return static_cast<double>(r) * static_cast<double>(s) +
         static_cast<double>(index_set_bits(d, s));
}

double min_bits_lower_bound(std::size_t d, double omega, int r) {
  if (d < 1 || omega < 0.0 || r < 1) {
    throw ConfigError("min_bits_lower_bound needs d >= 1, omega >= 0, r >= 1");
  }
  const double dd = static_cast<double>(d);
  if (omega <= 1.0 / (std::pow(4.0, r) - 1.0)) return r * dd;
  return dd * std::log(1.0 + 1.0 / omega) / std::log(4.0);
}

Compressor::Compressor(CompressorSpec spec, std::uint64_t master_seed)
    : spec_(spec), seed_(master_seed) {
  spec_.validate();
}

KeyedStream Compressor::stream(std::size_t worker, std::size_t round,
                               std::size_t call) const {
  const std::size_t w = spec_.randomness == Randomness::kShared ? 0 : worker;
  return KeyedStream(seed_, StreamDomain::kCompress, w, round, call);
}

double Compressor::compress(std::size_t worker, std::size_t round,
                            std::size_t call, const Vector& x,
                            Vector& out) const {
  require_dim(x, spec_.dim, "compress");
  const auto d = static_cast<Eigen::Index>(spec_.dim);
  switch (spec_.kind) {
    case CompressorKind::kIdentity:
      out = x;
      return *spec_.fixed_bits();

    case CompressorKind::kRandomS:
    case CompressorKind::kUnscaledRandomS: {
      KeyedStream rng = stream(worker, round, call);
      thread_local std::vector<std::uint32_t> idx;
      idx.resize(spec_.dim);
      std::iota(idx.begin(), idx.end(), 0u);
      const double scale = spec_.kind == CompressorKind::kRandomS
                               ? static_cast<double>(spec_.dim) /
                                     static_cast<double>(spec_.s)
                               : 1.0;
      out.setZero(d);
      for (std::size_t k = 0; k < spec_.s; ++k) {
        const std::size_t j = k + rng.below(spec_.dim - k);
        std::swap(idx[k], idx[j]);
        out[idx[k]] = scale * x[idx[k]];
      }
      return *spec_.fixed_bits();
    }

    case CompressorKind::kNatural: {
      KeyedStream rng = stream(worker, round, call);
      out.resize(d);
      for (Eigen::Index j = 0; j < d; ++j) {
        const double u = rng.uniform();
        const double a = std::abs(x[j]);
        if (a == 0.0) {
          out[j] = 0.0;
          continue;
        }
        int e = 0;
        const double m = std::frexp(a, &e);
        const double lo = std::ldexp(1.0, e - 1);
        double v = a;
        if (m != 0.5) v = u < (a - lo) / lo ? 2.0 * lo : lo;
        out[j] = std::copysign(v, x[j]);
      }
      return *spec_.fixed_bits();
    }

    case CompressorKind::kQuantize: {
      KeyedStream rng = stream(worker, round, call);
      const double norm = x.norm();
      const double sq = static_cast<double>(spec_.s);
      out.resize(d);
      double bits = spec_.raw_bits + static_cast<double>(spec_.dim);
      for (Eigen::Index j = 0; j < d; ++j) {
        const double u = rng.uniform();
        std::uint64_t level = 0;
        if (norm > 0.0) {
          const double r = std::abs(x[j]) / norm * sq;
          const double fl = std::floor(r);
          level = static_cast<std::uint64_t>(fl) + (u < r - fl ? 1 : 0);
        }
        out[j] = norm > 0.0 ? std::copysign(norm * static_cast<double>(level) / sq, x[j])
                            : 0.0;
        bits += static_cast<double>(elias_gamma_length(level + 1));
      }
      return bits;
    }
  }
  return 0.0;
}

Moments empirical_moments(const Compressor& c, const Vector& x,
                          std::size_t trials, std::size_t worker) {
  if (trials < 1000) throw ConfigError("empirical_moments needs trials >= 1000");
  const auto d = x.size();
  Vector sum = Vector::Zero(d), sum2 = Vector::Zero(d), out(d);
  double v1 = 0.0, v2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    c.compress(worker, t, 0, x, out);
    sum += out;
    sum2 += out.cwiseAbs2();
    const double e = (out - x).squaredNorm();
    v1 += e;
    v2 += e * e;
  }
  const double T = static_cast<double>(trials);
  Moments m;
  m.mean = sum / T;
  const Vector var = ((sum2 / T - m.mean.cwiseAbs2()) * (T / (T - 1.0))).cwiseMax(0.0);
  m.mean_se = (var / T).cwiseSqrt();
  m.variance = v1 / T;
  const double vv = std::max(0.0, (v2 / T - m.variance * m.variance) * (T / (T - 1.0)));
  m.variance_se = std::sqrt(vv / T);
  return m;
}

AggregateMoments aggregate_variance(const Compressor& c, std::size_t n,
                                    const Vector& x, std::size_t trials) {
  if (trials < 1000) throw ConfigError("aggregate_variance needs trials >= 1000");
  if (n == 0) throw ConfigError("aggregate_variance needs n >= 1");
  const auto d = x.size();
  Vector acc(d), out(d);
  double v1 = 0.0, v2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    acc.setZero();
    for (std::size_t i = 0; i < n; ++i) {
      c.compress(i, t, 0, x, out);
      acc += out;
    }
    acc /= static_cast<double>(n);
    const double e = (acc - x).squaredNorm();
    v1 += e;
    v2 += e * e;
  }
  const double T = static_cast<double>(trials);
  AggregateMoments a;
  a.variance = v1 / T;
  a.variance_se =
      std::sqrt(std::max(0.0, (v2 / T - a.variance * a.variance) * (T / (T - 1.0))) / T);
  return a;
}

}  // namespace commsim
