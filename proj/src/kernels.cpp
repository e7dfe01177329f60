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
#include "commsim/kernels.hpp"

#include <vector>

namespace commsim {

std::string to_string(Execution e) {
  return e == Execution::kOpenMP ? "openmp" : "serial";
}

Execution parse_execution(const std::string& s) {
  if (s == "serial") return Execution::kSerial;
  if (s == "openmp" || s == "omp") return Execution::kOpenMP;
  throw ConfigError("unknown execution mode '" + s + "'");
}

void tree_mean_inplace(std::span<Vector> xs, Vector& out) {
  const std::size_t n = xs.size();
  if (n == 0) throw Error("tree_mean of an empty set");
  for (std::size_t stride = 1; stride < n; stride *= 2) {
    for (std::size_t i = 0; i + stride < n; i += 2 * stride) {
      xs[i] += xs[i + stride];
    }
  }
  out = xs[0] / static_cast<double>(n);
}

double tree_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  std::vector<double> buf(xs.begin(), xs.end());
  const std::size_t n = buf.size();
  for (std::size_t stride = 1; stride < n; stride *= 2) {
    for (std::size_t i = 0; i + stride < n; i += 2 * stride) {
      buf[i] += buf[i + stride];
    }
  }
  return buf[0];
}

}  // namespace commsim
