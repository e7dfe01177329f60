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
#ifndef COMMSIM_PRESETS_HPP_
#define COMMSIM_PRESETS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "commsim/algorithms.hpp"
#include "commsim/compressors.hpp"

namespace commsim {

// Hand-tuned parameter sets for the reference experiments. alpha is
// 1/(1+omega) throughout; beta and gamma follow from eta, theta1 and mu.
struct Preset {
  std::string name;
  std::string algorithm;  // adiana | diana | ef21 | nesterov
  std::string problem;    // constructed | least_squares | a9a | w8a
  // "identity", "natural", "quantize", "random_s:<s>", "random_s:d/20",
  // "unscaled_random_s:d/20", optionally suffixed ":shared".
  std::string compressor;
  std::optional<ManualParams> adiana;
  double gamma = 0.0;  // diana, ef21
  double eta = 0.0;    // nesterov
  double theta = 0.0;  // nesterov
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);

CompressorSpec resolve_compressor_hint(const std::string& hint, std::size_t d);

}  // namespace commsim

#endif  // COMMSIM_PRESETS_HPP_
