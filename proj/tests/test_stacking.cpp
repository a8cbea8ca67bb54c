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
#include "vibdiag/error.hpp"
#include "vibdiag/stacking.hpp"
#include "vibdiag/statfeat.hpp"

using namespace vibdiag;

TEST_SUITE("stacking") {

TEST_CASE("dimensions for every term count") {
  CHECK(StatFeatures::kDim == 10);
  const std::size_t expected[] = {16, 19, 22, 25, 28, 31};
  for (int n = 2; n <= 7; ++n) {
    CHECK(parametric_dimension(n) == static_cast<std::size_t>(3 * n));
    CHECK(stacked_dimension(n) == expected[n - 2]);
  }
}

TEST_CASE("statistical block comes first") {
  const StatFeatures s = statistical_features(std::vector<double>{1, 2, 4, 8});
  const std::vector<double> param = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const StackedFeatures st = stack_features(s, 9, param, 9);
  REQUIRE(st.values.size() == 16);
  CHECK(st.n_terms == 2);
  CHECK(st.frame_index == 9);
  const auto arr = s.as_array();
  for (std::size_t i = 0; i < 10; ++i) CHECK(st.values[i] == arr[i]);
  for (std::size_t i = 0; i < 6; ++i) CHECK(st.values[10 + i] == param[i]);
}

TEST_CASE("mismatched frames are rejected") {
  const StatFeatures s;
  const std::vector<double> param(6, 0.0);
  try {
    stack_features(s, 1, param, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WindowMismatch);
  }
  CHECK_THROWS_AS(stack_features(s, 1, std::vector<double>(5, 0.0), 1), Error);
  CHECK_THROWS_AS(stack_features(s, 1, std::vector<double>(3, 0.0), 1), Error);
  CHECK_THROWS_AS(stack_features(s, 1, std::vector<double>(24, 0.0), 1), Error);
}

}  // TEST_SUITE
