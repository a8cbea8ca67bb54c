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

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "vibdiag/error.hpp"
#include "vibdiag/framing.hpp"

using namespace vibdiag;

TEST_SUITE("framing") {

TEST_CASE("frame count arithmetic") {
  const WindowConfig cfg;
  CHECK(frame_count(550, cfg) == 4);
  CHECK(frame_count(250, cfg) == 1);
  CHECK(frame_count(249, cfg) == 0);
  CHECK(frame_count(51200, cfg) == 510);
  for (std::size_t len = 250; len < 2000; len += 37) {
    CHECK(frame_count(len, cfg) == (len - 250) / 100 + 1);
  }
}

TEST_CASE("frames are contiguous slices at shift offsets") {
  std::vector<double> x(550);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  const auto frames = frame_signal(x, WindowConfig{});
  REQUIRE(frames.size() == 4);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    CHECK(frames[f].start == 100 * f);
    REQUIRE(frames[f].samples.size() == 250);
    CHECK(frames[f].samples.front() == static_cast<double>(100 * f));
    CHECK(frames[f].samples.back() == static_cast<double>(100 * f + 249));
  }
}

TEST_CASE("short signals and bad windows are rejected") {
  std::vector<double> x(249, 1.0);
  try {
    frame_signal(x, WindowConfig{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SignalTooShort);
  }
  CHECK_THROWS_AS((WindowConfig{250, 0}.validate()), Error);
  CHECK_THROWS_AS((WindowConfig{250, 251}.validate()), Error);
  CHECK_THROWS_AS((WindowConfig{2, 1}.validate()), Error);
}

TEST_CASE("hamming coefficients") {
  const auto w = hamming_coeffs(250);
  const auto ref = oracle::hamming(250);
  REQUIRE(w.size() == ref.size());
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] == doctest::Approx(ref[i]).epsilon(1e-15));
  CHECK(w[0] == doctest::Approx(0.08));
  CHECK(w[125] == doctest::Approx(1.0));
  // Periodic form: symmetric about k/2.
  for (std::size_t i = 1; i < 125; ++i) CHECK(w[i] == doctest::Approx(w[250 - i]).epsilon(1e-14));
}

TEST_CASE("cepstrum matches plain DFT oracle") {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto frame = oracle::random_frame(rng, 250);
    const auto got = cepstral_transform(frame);
    const auto ref = oracle::cepstrum(frame);
    REQUIRE(got.values.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(got.values[i] - ref[i]));
    CHECK(got.residual_imag < 1e-9);
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("rectangular taper skips the window") {
  std::mt19937_64 rng(12);
  const auto frame = oracle::random_frame(rng, 64);
  const auto got = cepstral_transform(frame, Taper::Rectangular);
  const auto ref = oracle::cepstrum(frame, false);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(got.values[i] - ref[i]) < 1e-9);
}

TEST_CASE("odd and prime lengths are supported") {
  std::mt19937_64 rng(13);
  for (std::size_t n : {2u, 7u, 97u, 251u}) {
    const auto frame = oracle::random_frame(rng, n);
    const auto got = cepstral_transform(frame);
    const auto ref = oracle::cepstrum(frame);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got.values[i] - ref[i]) < 1e-9);
  }
}

TEST_CASE("transform round trip without the log is the identity") {
  // The oracle's forward and inverse transforms are checked against each other
  // here; the library's transform is checked against the oracle above.
  std::mt19937_64 rng(14);
  const auto frame = oracle::random_frame(rng, 250);
  std::vector<std::complex<double>> x(frame.begin(), frame.end());
  const auto back = oracle::dft(oracle::dft(x, false), true);
  for (std::size_t i = 0; i < frame.size(); ++i) CHECK(std::abs(back[i] - x[i]) < 1e-9);
}

TEST_CASE("zero frame hits the log floor") {
  const std::vector<double> zeros(250, 0.0);
  const auto c = cepstral_transform(zeros);
  CHECK(c.values[0] == doctest::Approx(std::log(1e-12)));
  for (std::size_t i = 1; i < zeros.size(); ++i) CHECK(std::abs(c.values[i]) < 1e-9);
}

TEST_CASE("non-finite and tiny frames are rejected") {
  std::vector<double> bad(16, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(cepstral_transform(bad), Error);
  CHECK_THROWS_AS(cepstral_transform(std::vector<double>{1.0}), Error);
}

}  // TEST_SUITE
