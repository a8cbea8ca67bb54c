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

namespace vibdiag {

struct WindowConfig {
  std::size_t window_len = 250;
  std::size_t shift = 100;

  void validate() const;
};

struct Frame {
  std::vector<double> samples;
  std::size_t start = 0;  // offset of samples[0] in the source signal
};

struct CepstralFrame {
  std::vector<double> values;
  // Largest |imag| left by the inverse transform; should be round-off only.
  double residual_imag = 0.0;
};

enum class Taper { Hamming, Rectangular };

// Additive floor inside log(|X| + floor).
inline constexpr double kLogFloor = 1e-12;

// floor((len - window_len) / shift) + 1, or 0 when len < window_len.
std::size_t frame_count(std::size_t len, const WindowConfig& cfg);

std::vector<Frame> frame_signal(std::span<const double> samples, const WindowConfig& cfg);

// w(t) = 0.54 - 0.46 cos(2 pi t / k), t = 0..k-1.
std::vector<double> hamming_coeffs(std::size_t k);

// Real part of IFFT(log(|FFT(x * taper)| + kLogFloor)), transform length = x.size().
CepstralFrame cepstral_transform(std::span<const double> frame, Taper taper = Taper::Hamming);
inline CepstralFrame cepstral_transform(const Frame& frame, Taper taper = Taper::Hamming) {
  return cepstral_transform(std::span<const double>(frame.samples), taper);
}

}  // namespace vibdiag
