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
#ifndef COMMSIM_KERNELS_HPP_
#define COMMSIM_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string>

#include "commsim/core.hpp"

namespace commsim {

enum class Execution { kSerial, kOpenMP };

std::string to_string(Execution e);
Execution parse_execution(const std::string& s);

// Serial reference loop over workers.
template <class Fn>
void for_each_worker_serial(std::size_t n, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

// Same contract as the serial loop. fn(i) may only write state owned by
// worker i; anything shared is reduced afterwards in canonical order.
template <class Fn>
void for_each_worker_omp(std::size_t n, Fn&& fn) {
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

template <class Fn>
void for_each_worker(Execution ex, std::size_t n, Fn&& fn) {
  if (ex == Execution::kOpenMP) {
    for_each_worker_omp(n, fn);
  } else {
    for_each_worker_serial(n, fn);
  }
}

// Pairwise sum with a fixed tree shape, divided by the count. Consumes xs.
void tree_mean_inplace(std::span<Vector> xs, Vector& out);
double tree_sum(std::span<const double> xs);

}  // namespace commsim

#endif  // COMMSIM_KERNELS_HPP_
