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

#include "vibdiag/statfeat.hpp"

#include <algorithm>
#include <cmath>

#include "vibdiag/error.hpp"

namespace vibdiag {

std::array<double, StatFeatures::kDim> StatFeatures::as_array() const noexcept {
  return {mean, std, skewness, kurtosis, peak_to_peak,
          rms,  crest_factor, shape_factor, impulse_factor, energy};
}

const std::array<std::string_view, StatFeatures::kDim>& StatFeatures::names() noexcept {
  static constexpr std::array<std::string_view, kDim> kNames = {
      "mean", "std", "skewness", "kurtosis", "peak_to_peak",
      "rms",  "crest_factor", "shape_factor", "impulse_factor", "energy"};
  return kNames;
}

StatFeatures statistical_features(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(Errc::TooShort, "need at least 2 values");
  // Moment sums run in extended precision; the odd moments cancel heavily.
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  double lo = values[0];
  double hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteInput, "non-finite value");
    sum += v;
    sum_sq += static_cast<long double>(v) * v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const auto count = static_cast<long double>(n);
  const long double mean = sum / count;

  StatFeatures f;
  f.mean = static_cast<double>(mean);
  long double m2 = 0.0L;
  long double m3 = 0.0L;
  long double m4 = 0.0L;
  // A constant sequence has zero spread even if the rounded mean is off by an ulp.
  for (double v : (hi > lo ? values : std::span<const double>{})) {
    const long double d = v - mean;
    const long double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const long double sd = std::sqrt(m2 / (count - 1.0L));
  f.std = static_cast<double>(sd);
  if (sd > 0.0L) {
    const long double s3 = sd * sd * sd;
    f.skewness = static_cast<double>(m3 / ((count - 1.0L) * s3));
    f.kurtosis = static_cast<double>(m4 / ((count - 1.0L) * s3 * sd));
  }
  f.peak_to_peak = hi - lo;
  f.energy = static_cast<double>(sum_sq);
  f.rms = static_cast<double>(std::sqrt(sum_sq / count));
  f.crest_factor = f.rms > 0.0 ? f.peak_to_peak / f.rms : 0.0;
  if (std::abs(f.mean) >= kMeanZeroGuard) {
    f.shape_factor = f.rms / f.mean;
    f.impulse_factor = f.peak_to_peak / f.mean;
  }
  return f;
}

}  // namespace vibdiag
