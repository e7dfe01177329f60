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
#ifndef COMMSIM_ELIAS_HPP_
#define COMMSIM_ELIAS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace commsim {

// Bitstrings are '0'/'1' characters; they only exist for codec tests, the
// simulator itself counts lengths.
using BitString = std::string;

// Elias gamma code of v >= 1: floor(log2 v) zeros followed by v in binary.
BitString elias_gamma_encode(std::uint64_t v);
std::size_t elias_gamma_length(std::uint64_t v);

// Sequences of non-negative integers; each value is coded as gamma(v + 1).
BitString elias_encode(std::span<const std::uint64_t> values);
std::vector<std::uint64_t> elias_decode(std::string_view bits);
std::size_t elias_encoded_length(std::span<const std::uint64_t> values);

}  // namespace commsim

#endif  // COMMSIM_ELIAS_HPP_
