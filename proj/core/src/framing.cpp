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

#include "vibdiag/framing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "vibdiag/error.hpp"

namespace vibdiag {

void WindowConfig::validate() const {
  if (window_len < 4) throw Error(Errc::InvalidConfig, "window_len must be >= 4");
  if (shift == 0 || shift > window_len) {
    throw Error(Errc::InvalidConfig, "shift must be in [1, window_len]");
  }
}

std::size_t frame_count(std::size_t len, const WindowConfig& cfg) {
  if (len < cfg.window_len) return 0;
  return (len - cfg.window_len) / cfg.shift + 1;
}

std::vector<Frame> frame_signal(std::span<const double> samples, const WindowConfig& cfg) {
  cfg.validate();
  if (samples.size() < cfg.window_len) {
    throw Error(Errc::SignalTooShort, std::to_string(samples.size()) + " samples < window " +
                std::to_string(cfg.window_len));
  }
  const std::size_t count = frame_count(samples.size(), cfg);
  std::vector<Frame> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t start = i * cfg.shift;
    auto part = samples.subspan(start, cfg.window_len);
    frames.push_back(Frame{{part.begin(), part.end()}, start});
  }
  return frames;
}

std::vector<double> hamming_coeffs(std::size_t k) {
  if (k < 2) throw Error(Errc::InvalidConfig, "hamming window needs k >= 2");
  std::vector<double> w(k);
  const double denom = static_cast<double>(k);
  for (std::size_t t = 0; t < k; ++t) {
    w[t] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / denom);
  }
  return w;
}

CepstralFrame cepstral_transform(std::span<const double> frame, Taper taper) {
  const std::size_t n = frame.size();
  if (n < 2) throw Error(Errc::TooShort, "frame needs at least 2 samples");
  if (!std::all_of(frame.begin(), frame.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(Errc::NonFiniteInput, "frame contains non-finite samples");
  }
  std::vector<std::complex<double>> time(n);
  if (taper == Taper::Hamming) {
    const auto w = hamming_coeffs(n);
    for (std::size_t i = 0; i < n; ++i) time[i] = frame[i] * w[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) time[i] = frame[i];
  }

  // Local engine: the plan cache is per-object, so concurrent calls are safe.
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, time);
  for (auto& c : spec) c = std::log(std::abs(c) + kLogFloor);
  std::vector<std::complex<double>> back;
  fft.inv(back, spec);

  CepstralFrame out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = back[i].real();
    out.residual_imag = std::max(out.residual_imag, std::abs(back[i].imag()));
  }
  return out;
}

}  // namespace vibdiag
