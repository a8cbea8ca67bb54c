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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vibdiag/statfeat.hpp"

namespace vibdiag {

constexpr std::size_t parametric_dimension(int n_terms) noexcept {
  return 3 * static_cast<std::size_t>(n_terms);
}
constexpr std::size_t stacked_dimension(int n_terms) noexcept {
  return StatFeatures::kDim + parametric_dimension(n_terms);
}

// Statistical block at [0, 10), parametric block at [10, 10 + 3n).
struct StackedFeatures {
  std::vector<double> values;
  int n_terms = 0;
  std::size_t frame_index = 0;
};

// Both halves must come from the same frame; differing indices throw
// WindowMismatch. `param` must hold 3n values with n in [2, 7].
StackedFeatures stack_features(const StatFeatures& stat, std::size_t stat_frame_index,
                               std::span<const double> param, std::size_t param_frame_index);

}  // namespace vibdiag
