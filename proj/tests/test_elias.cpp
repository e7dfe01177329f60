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
#include <vector>

#include <doctest.h>

#include "commsim/elias.hpp"
#include "commsim/random.hpp"

using namespace commsim;

TEST_CASE("gamma codes by hand") {
  CHECK(elias_gamma_encode(1) == "1");
  CHECK(elias_gamma_encode(2) == "010");
  CHECK(elias_gamma_encode(4) == "00100");
  CHECK(elias_gamma_encode(9) == "0001001");
  CHECK(elias_gamma_length(1) == 1);
  CHECK(elias_gamma_length(4) == 5);
  CHECK(elias_gamma_length(255) == 15);
  CHECK(elias_gamma_length(256) == 17);
  CHECK_THROWS(elias_gamma_encode(0));
}

TEST_CASE("gamma length matches the encoder") {
  for (std::uint64_t v = 1; v < 5000; v += 7) {
    CHECK(elias_gamma_length(v) == elias_gamma_encode(v).size());
  }
}

TEST_CASE("sequence codec round trip") {
  KeyedStream g(3, StreamDomain::kProbe);
  std::vector<std::uint64_t> v;
  for (int k = 0; k < 1000; ++k) {
    // Mix of small and wide values.
    v.push_back(k % 3 == 0 ? g.below(4) : g() >> (g.below(60) + 1));
  }
  const BitString bits = elias_encode(v);
  CHECK(bits.size() == elias_encoded_length(v));
  CHECK(elias_decode(bits) == v);

  const std::vector<std::uint64_t> zeros(5, 0);
  CHECK(elias_encode(zeros) == "11111");
  CHECK(elias_decode("").empty());
}

TEST_CASE("decoder rejects malformed input") {
  CHECK_THROWS(elias_decode("001"));
  CHECK_THROWS(elias_decode("0010"));
  CHECK_THROWS(elias_decode("1x"));
  CHECK_THROWS(elias_decode(std::string(70, '0') + "1"));
}
