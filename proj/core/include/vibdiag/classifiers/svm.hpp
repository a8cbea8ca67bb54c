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
#include <cstdint>
#include <span>
#include <vector>

#include "vibdiag/dataset.hpp"

namespace vibdiag {

struct SvmConfig {
  double gamma = 0.1;
  double c = 0.8;
  double tol = 1e-3;  // KKT violation gap at which SMO stops
  std::int64_t max_iter = 10'000'000;
  std::size_t cache_mb = 64;  // kernel column cache per binary problem
};

// K(a, b) = exp(-gamma ||a - b||^2)
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

// One binary machine; samples of `positive` carry y = +1.
struct BinarySvm {
  FaultClass positive = FaultClass::Normal;
  FaultClass negative = FaultClass::Outer;
  FeatureMatrix support_vectors;
  std::vector<double> alpha;  // 0 < alpha <= C, one per support vector
  std::vector<int> y;         // +1 / -1
  double bias = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;

  double decision(std::span<const double> x, double gamma) const;
};

// One-vs-one ensemble over the classes present at training time.
struct SvmModel {
  std::size_t dim = 0;
  double gamma = 0.1;
  double c = 0.8;
  std::vector<BinarySvm> machines;

  // Pairwise vote; ties go to the lowest class index.
  FaultClass predict(std::span<const double> x) const;
};

// SMO on the soft-margin dual with maximal-violating-pair selection.
BinarySvm train_binary_svm(const Dataset& data, FaultClass positive, FaultClass negative,
                           const SvmConfig& cfg = {});

SvmModel train_svm(const Dataset& data, const SvmConfig& cfg = {});

}  // namespace vibdiag
