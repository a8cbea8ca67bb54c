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
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "vibdiag/error.hpp"
#include "vibdiag/framing.hpp"
#include "vibdiag/statfeat.hpp"

using namespace vibdiag;

namespace {

void check_against_oracle(const std::vector<double>& v, double tol) {
  const StatFeatures s = statistical_features(v);
  const oracle::Stats r = oracle::stats(v);
  CHECK(oracle::relative_error(s.mean, r.mean) < tol);
  CHECK(oracle::relative_error(s.std, r.std) < tol);
  CHECK(oracle::relative_error(s.skewness, r.skewness) < tol);
  CHECK(oracle::relative_error(s.kurtosis, r.kurtosis) < tol);
  CHECK(oracle::relative_error(s.peak_to_peak, r.p2p) < tol);
  CHECK(oracle::relative_error(s.rms, r.rms) < tol);
  CHECK(oracle::relative_error(s.crest_factor, r.crest) < tol);
  CHECK(oracle::relative_error(s.shape_factor, r.shape) < tol);
  CHECK(oracle::relative_error(s.impulse_factor, r.impulse) < tol);
  CHECK(oracle::relative_error(s.energy, r.energy) < tol);
}

}  // namespace

TEST_SUITE("statfeat") {

TEST_CASE("small worked example") {
  const StatFeatures s = statistical_features(std::vector<double>{1, 2, 3});
  CHECK(s.mean == 2.0);
  CHECK(s.std == doctest::Approx(1.0));
  CHECK(s.peak_to_peak == 2.0);
  CHECK(s.rms == doctest::Approx(std::sqrt(14.0 / 3.0)));
  CHECK(s.energy == doctest::Approx(14.0));
  CHECK(s.skewness == doctest::Approx(0.0));
  CHECK(s.crest_factor == doctest::Approx(2.0 / std::sqrt(14.0 / 3.0)));
  CHECK(s.shape_factor == doctest::Approx(std::sqrt(14.0 / 3.0) / 2.0));
  CHECK(s.impulse_factor == doctest::Approx(1.0));
}

TEST_CASE("matches naive oracle on random frames") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> offset(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = oracle::random_frame(rng, 250);
    const double shift = offset(rng);
    for (double& x : v) x += shift;
    check_against_oracle(v, 1e-12);
  }
}

TEST_CASE("matches naive oracle on cepstral frames") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto frame = oracle::random_frame(rng, 250);
    check_against_oracle(cepstral_transform(frame).values, 1e-12);
  }
}

TEST_CASE("constant sequence takes the degenerate conventions") {
  const StatFeatures s = statistical_features(std::vector<double>(50, 3.0));
  CHECK(s.std == 0.0);
  CHECK(s.peak_to_peak == 0.0);
  CHECK(s.crest_factor == 0.0);
  CHECK(s.skewness == 0.0);
  CHECK(s.kurtosis == 0.0);
  CHECK(s.shape_factor == doctest::Approx(1.0));
  CHECK(s.impulse_factor == 0.0);
}

TEST_CASE("zero mean guard") {
  const StatFeatures s = statistical_features(std::vector<double>{-1, 1, -1, 1});
  CHECK(s.shape_factor == 0.0);
  CHECK(s.impulse_factor == 0.0);
  const StatFeatures z = statistical_features(std::vector<double>(8, 0.0));
  CHECK(z.crest_factor == 0.0);
  CHECK(z.rms == 0.0);
}

TEST_CASE("skewness is odd under reflection") {
  std::mt19937_64 rng(23);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(100), w(100);
  for (auto& x : v) x = e(rng);
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = -v[v.size() - 1 - i];
  const StatFeatures a = statistical_features(v);
  const StatFeatures b = statistical_features(w);
  CHECK(a.skewness > 0.5);
  CHECK(a.skewness == doctest::Approx(-b.skewness).epsilon(1e-12));
  CHECK(a.kurtosis == doctest::Approx(b.kurtosis).epsilon(1e-12));
}

TEST_CASE("scale behaviour") {
  std::mt19937_64 rng(24);
  auto v = oracle::random_frame(rng, 128);
  for (double& x : v) x += 1.0;
  const StatFeatures a = statistical_features(v);
  for (double& x : v) x *= 3.0;
  const StatFeatures b = statistical_features(v);
  CHECK(b.std == doctest::Approx(3.0 * a.std));
  CHECK(b.energy == doctest::Approx(9.0 * a.energy));
  CHECK(b.skewness == doctest::Approx(a.skewness));
  CHECK(b.kurtosis == doctest::Approx(a.kurtosis));
  CHECK(b.crest_factor == doctest::Approx(a.crest_factor));
  CHECK(b.shape_factor == doctest::Approx(a.shape_factor));
}

TEST_CASE("field order is fixed") {
  const auto& names = StatFeatures::names();
  CHECK(names.size() == 10);
  CHECK(names.front() == "mean");
  CHECK(names.back() == "energy");
  const StatFeatures s = statistical_features(std::vector<double>{1, 2, 4});
  const auto arr = s.as_array();
  CHECK(arr[0] == s.mean);
  CHECK(arr[4] == s.peak_to_peak);
  CHECK(arr[9] == s.energy);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(statistical_features(std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(statistical_features(std::vector<double>{1.0, INFINITY}), Error);
}

}  // TEST_SUITE
