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
#ifndef COMMSIM_RANDOM_HPP_
#define COMMSIM_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace commsim {

enum class StreamDomain : std::uint64_t {
  kCompress = 1,
  kServer = 2,
  kProblem = 3,
  kProgress = 4,
  kProbe = 5,
};

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based substream. The state is a hash of the key tuple, so any
// (seed, domain, a, b, c) can be opened in any order without touching
// other streams.
class KeyedStream {
 public:
  using result_type = std::uint64_t;

  KeyedStream(std::uint64_t seed, StreamDomain domain, std::uint64_t a = 0,
              std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = splitmix64_mix(seed + 0x9e3779b97f4a7c15ULL);
    h = splitmix64_mix(h ^ static_cast<std::uint64_t>(domain));
    h = splitmix64_mix(h ^ (a + 0x632be59bd9b4e019ULL));
    h = splitmix64_mix(h ^ (b + 0x8cb92ba72f3d8dd7ULL));
    h = splitmix64_mix(h ^ (c + 0xd1b54a32d192ed03ULL));
    state_ = h;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform on {0, ..., bound-1}, rejection on the biased tail.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t v;
    do {
      v = (*this)();
    } while (v >= limit);
    return v % bound;
  }

  // Box-Muller; the second variate is discarded so that draws stay a pure
  // function of the call count.
  double normal() {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace commsim

#endif  // COMMSIM_RANDOM_HPP_
