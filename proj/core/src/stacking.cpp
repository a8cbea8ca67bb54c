// Copyright 2026 The vibdiag Authors. All rights reserved.
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

#include "vibdiag/stacking.hpp"

#include <string>

#include "vibdiag/error.hpp"
#include "vibdiag/gaussfit.hpp"

namespace vibdiag {

StackedFeatures stack_features(const StatFeatures& stat, std::size_t stat_frame_index,
                               std::span<const double> param, std::size_t param_frame_index) {
  if (stat_frame_index != param_frame_index) {
    throw Error(Errc::WindowMismatch, "statistical frame " + std::to_string(stat_frame_index) +
                " vs parametric frame " + std::to_string(param_frame_index));
  }
  if (param.size() % 3 != 0 || param.size() < parametric_dimension(kMinTerms) ||
      param.size() > parametric_dimension(kMaxTerms)) {
    throw Error(Errc::DimMismatch,
                "parametric block of length " + std::to_string(param.size()));
  }
  StackedFeatures out;
  out.n_terms = static_cast<int>(param.size() / 3);
  out.frame_index = stat_frame_index;
  const auto block = stat.as_array();
  out.values.reserve(StatFeatures::kDim + param.size());
  out.values.assign(block.begin(), block.end());
  out.values.insert(out.values.end(), param.begin(), param.end());
  return out;
}

}  // namespace vibdiag
