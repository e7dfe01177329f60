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
#ifndef COMMSIM_COMPRESSORS_HPP_
#define COMMSIM_COMPRESSORS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "commsim/core.hpp"
#include "commsim/random.hpp"

namespace commsim {

enum class CompressorKind { kIdentity, kRandomS, kUnscaledRandomS, kNatural, kQuantize };
enum class Randomness { kIndependent, kShared };

std::string to_string(CompressorKind kind);
std::string to_string(Randomness r);
CompressorKind parse_compressor_kind(const std::string& s);
Randomness parse_randomness(const std::string& s);

struct CompressorSpec {
  CompressorKind kind = CompressorKind::kIdentity;
  std::size_t dim = 0;
  // Kept coordinates for random_s / unscaled_random_s, levels for quantize.
  std::size_t s = 0;
  Randomness randomness = Randomness::kIndependent;
  int raw_bits = 64;

  static CompressorSpec identity(std::size_t d);
  static CompressorSpec random_s(std::size_t d, std::size_t s,
                                 Randomness r = Randomness::kIndependent);
  static CompressorSpec unscaled_random_s(
      std::size_t d, std::size_t s, Randomness r = Randomness::kIndependent);
  static CompressorSpec natural(std::size_t d,
                                Randomness r = Randomness::kIndependent);
  // levels = 0 selects ceil(sqrt(d)).
  static CompressorSpec quantize(std::size_t d, std::size_t levels = 0,
                                 Randomness r = Randomness::kIndependent);

  void validate() const;
  // Declared variance parameter. The unscaled operator is biased; it
  // reports the omega of its scaled twin for bookkeeping.
  double omega() const;
  bool unbiased() const { return kind != CompressorKind::kUnscaledRandomS; }
  // Per-message cost when it does not depend on the message.
  std::optional<double> fixed_bits() const;
  // e.g. "rand-1-id", "natural-sd", "quantize-5-id", "identity".
  std::string id() const;
};

// ceil(log2 C(d, s)), exact.
std::uint64_t index_set_bits(std::size_t d, std::size_t s);
double random_s_bits(std::size_t d, std::size_t s, int r = 64);
double min_bits_lower_bound(std::size_t d, double omega, int r = 64);

class Compressor {
 public:
  Compressor(CompressorSpec spec, std::uint64_t master_seed);

  const CompressorSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

  // Writes C_worker(x) into out and returns the message bits. out must not
  // alias x.
  double compress(std::size_t worker, std::size_t round, std::size_t call,
                  const Vector& x, Vector& out) const;

  KeyedStream stream(std::size_t worker, std::size_t round,
                     std::size_t call) const;

 private:
  CompressorSpec spec_;
  std::uint64_t seed_;
};

struct Moments {
  Vector mean;
  Vector mean_se;
  // Sample mean of |C(x)-x|^2 and its standard error.
  double variance = 0.0;
  double variance_se = 0.0;
};

// Draws C(x) for rounds 0..trials-1 of one worker.
Moments empirical_moments(const Compressor& c, const Vector& x,
                          std::size_t trials, std::size_t worker = 0);

struct AggregateMoments {
  double variance = 0.0;
  double variance_se = 0.0;
};

// Sample mean of |(1/n) sum_i C_i(x) - x|^2 over rounds 0..trials-1.
AggregateMoments aggregate_variance(const Compressor& c, std::size_t n,
                                    const Vector& x, std::size_t trials);

}  // namespace commsim

#endif  // COMMSIM_COMPRESSORS_HPP_
