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

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace vibdiag {

// Ten waveform statistics in a fixed order; that order is part of every
// feature vector and CSV layout.
struct StatFeatures {
  static constexpr std::size_t kDim = 10;

  double mean = 0.0;
  double std = 0.0;  // k-1 divisor
  double skewness = 0.0;
  double kurtosis = 0.0;
  double peak_to_peak = 0.0;
  double rms = 0.0;
  double crest_factor = 0.0;    // peak_to_peak / rms
  double shape_factor = 0.0;    // rms / mean
  double impulse_factor = 0.0;  // peak_to_peak / mean
  double energy = 0.0;

  std::array<double, kDim> as_array() const noexcept;
  static const std::array<std::string_view, kDim>& names() noexcept;
};

// |mean| below this makes shape and impulse factors 0.
inline constexpr double kMeanZeroGuard = 1e-15;

// Skewness and kurtosis divide the central-moment sums by (n-1) std^k; they
// are 0 when std == 0. Crest factor is 0 when rms == 0.
StatFeatures statistical_features(std::span<const double> values);

}  // namespace vibdiag
