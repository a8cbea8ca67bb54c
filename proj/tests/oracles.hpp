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

// Reference implementations used only by tests. They follow textbook
// definitions directly and share no code with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace vibdiag::oracle {

inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x,
                                             bool inverse) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      // Reduce k*t mod n first so the angle stays accurate.
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) /
                           static_cast<double>(n);
      acc += x[t] * std::polar(1.0, angle);
    }
    out[k] = inverse ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

inline std::vector<double> hamming(std::size_t k) {
  std::vector<double> w(k);
  for (std::size_t t = 0; t < k; ++t) {
    w[t] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) /
                                  static_cast<double>(k));
  }
  return w;
}

inline std::vector<double> cepstrum(const std::vector<double>& frame, bool taper = true) {
  const auto w = hamming(frame.size());
  std::vector<std::complex<double>> x(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) x[i] = taper ? frame[i] * w[i] : frame[i];
  auto spec = dft(x, false);
  for (auto& v : spec) v = std::log(std::abs(v) + 1e-12);
  const auto back = dft(spec, true);
  std::vector<double> out(back.size());
  for (std::size_t i = 0; i < back.size(); ++i) out[i] = back[i].real();
  return out;
}

struct Stats {
  double mean, std, skewness, kurtosis, p2p, rms, crest, shape, impulse, energy;
};

// Textbook formulas evaluated with long double accumulation.
inline Stats stats(const std::vector<double>& v) {
  const auto n = static_cast<long double>(v.size());
  long double sum = 0, sq = 0;
  for (double x : v) {
    sum += x;
    sq += static_cast<long double>(x) * x;
  }
  const long double mean = sum / n;
  long double m2 = 0, m3 = 0, m4 = 0;
  for (double x : v) {
    const long double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const long double sd = std::sqrt(m2 / (n - 1));
  const double hi = *std::max_element(v.begin(), v.end());
  const double lo = *std::min_element(v.begin(), v.end());
  Stats s{};
  s.mean = static_cast<double>(mean);
  s.std = static_cast<double>(sd);
  s.skewness = sd > 0 ? static_cast<double>(m3 / ((n - 1) * sd * sd * sd)) : 0.0;
  s.kurtosis = sd > 0 ? static_cast<double>(m4 / ((n - 1) * sd * sd * sd * sd)) : 0.0;
  s.p2p = hi - lo;
  s.rms = static_cast<double>(std::sqrt(sq / n));
  s.crest = s.rms > 0 ? s.p2p / s.rms : 0.0;
  s.shape = std::abs(s.mean) < 1e-15 ? 0.0 : s.rms / s.mean;
  s.impulse = std::abs(s.mean) < 1e-15 ? 0.0 : s.p2p / s.mean;
  s.energy = static_cast<double>(sq);
  return s;
}

// Conditional entropy (bits) of a binary threshold split, straight from counts.
inline double split_entropy(const std::vector<double>& x, const std::vector<int>& y,
                            double threshold) {
  std::map<int, double> left, right;
  double nl = 0, nr = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= threshold) {
      left[y[i]] += 1;
      nl += 1;
    } else {
      right[y[i]] += 1;
      nr += 1;
    }
  }
  auto h = [](const std::map<int, double>& counts, double total) {
    double e = 0;
    for (const auto& [label, c] : counts) {
      if (c > 0) e -= (c / total) * std::log2(c / total);
    }
    return e;
  };
  const double n = nl + nr;
  return (nl > 0 ? nl / n * h(left, nl) : 0.0) + (nr > 0 ? nr / n * h(right, nr) : 0.0);
}

inline double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

inline std::vector<double> random_frame(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

}  // namespace vibdiag::oracle
