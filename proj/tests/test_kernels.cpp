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
#include <atomic>
#include <vector>

#include <doctest.h>

#include "commsim/kernels.hpp"
#include "commsim/random.hpp"

using namespace commsim;

TEST_CASE("every worker is visited once") {
  for (Execution ex : {Execution::kSerial, Execution::kOpenMP}) {
    std::vector<std::atomic<int>> hits(37);
    for_each_worker(ex, hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("execution names") {
  CHECK(parse_execution("serial") == Execution::kSerial);
  CHECK(parse_execution("openmp") == Execution::kOpenMP);
  CHECK(to_string(Execution::kOpenMP) == "openmp");
  CHECK_THROWS_AS(parse_execution("gpu"), ConfigError);
}

TEST_CASE("pairwise mean") {
  for (std::size_t n : {1, 2, 3, 7, 8, 400}) {
    std::vector<Vector> xs, copy;
    Vector naive = Vector::Zero(5);
    for (std::size_t i = 0; i < n; ++i) {
      KeyedStream g(1, StreamDomain::kProbe, i);
      Vector v(5);
      for (Eigen::Index j = 0; j < 5; ++j) v[j] = g.normal();
      naive += v;
      xs.push_back(v);
    }
    naive /= static_cast<double>(n);
    copy = xs;
    Vector a, b;
    tree_mean_inplace(xs, a);
    tree_mean_inplace(copy, b);
    CHECK(a == b);
    CHECK((a - naive).norm() <= 1e-13 * std::max(1.0, naive.norm()));
  }
  std::vector<Vector> none;
  Vector out;
  CHECK_THROWS(tree_mean_inplace(none, out));
}

TEST_CASE("pairwise sum") {
  std::vector<double> v;
  for (int i = 1; i <= 101; ++i) v.push_back(i);
  CHECK(tree_sum(v) == 5151.0);
  CHECK(tree_sum(std::vector<double>{}) == 0.0);
  // Bracketing is fixed: ((a+b)+(c+d)).
  const std::vector<double> w = {1e16, 1.0, -1e16, 1.0};
  CHECK(tree_sum(w) == (1e16 + 1.0) + (-1e16 + 1.0));
}
