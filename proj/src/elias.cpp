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
#include "commsim/elias.hpp"

#include <bit>
#include <limits>

#include "commsim/core.hpp"

namespace commsim {

std::size_t elias_gamma_length(std::uint64_t v) {
  if (v == 0) throw Error("elias gamma is defined for v >= 1");
  return 2 * static_cast<std::size_t>(std::bit_width(v)) - 1;
}

BitString elias_gamma_encode(std::uint64_t v) {
  const std::size_t width = elias_gamma_length(v) / 2 + 1;
  BitString out(width - 1, '0');
  for (std::size_t b = width; b-- > 0;) out.push_back((v >> b) & 1 ? '1' : '0');
  return out;
}

BitString elias_encode(std::span<const std::uint64_t> values) {
  BitString out;
  for (auto v : values) {
    if (v == std::numeric_limits<std::uint64_t>::max()) {
      throw Error("elias_encode: value too large for the +1 shift");
    }
    out += elias_gamma_encode(v + 1);
  }
  return out;
}

std::size_t elias_encoded_length(std::span<const std::uint64_t> values) {
  std::size_t n = 0;
  for (auto v : values) n += elias_gamma_length(v + 1);
  return n;
}

std::vector<std::uint64_t> elias_decode(std::string_view bits) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos < bits.size()) {
    std::size_t zeros = 0;
    while (pos < bits.size() && bits[pos] == '0') {
      ++zeros;
      ++pos;
    }
    if (pos == bits.size()) throw Error("elias_decode: truncated prefix");
    if (zeros > 63) throw Error("elias_decode: codeword longer than 64 bits");
    if (pos + zeros + 1 > bits.size()) {
      throw Error("elias_decode: truncated codeword");
    }
    std::uint64_t v = 0;
    for (std::size_t b = 0; b <= zeros; ++b) {
      const char c = bits[pos + b];
      if (c != '0' && c != '1') throw Error("elias_decode: non-binary symbol");
      v = (v << 1) | static_cast<std::uint64_t>(c == '1');
    }
    pos += zeros + 1;
    out.push_back(v - 1);
  }
  return out;
}

}  // namespace commsim
