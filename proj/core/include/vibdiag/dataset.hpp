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
#include <vector>

#include <Eigen/Core>

#include "vibdiag/dataio.hpp"

namespace vibdiag {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ClassCounts = std::array<std::size_t, kNumClasses>;

// Row i of `features` is labelled labels[i].
struct Dataset {
  FeatureMatrix features;
  std::vector<FaultClass> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(features.cols()); }
  std::span<const double> row(std::size_t i) const noexcept {
    return {features.data() + i * dim(), dim()};
  }

  ClassCounts class_counts() const;
  std::size_t distinct_classes() const;
  Dataset subset(std::span<const std::size_t> indices) const;

  // EmptyDataset when there are no rows; NonFiniteInput on NaN/inf;
  // SingleClass when `min_classes` distinct labels are not present.
  void validate(std::size_t min_classes = 1) const;

  static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                           std::vector<FaultClass> labels);
};

// Per-feature z-score; zero-variance features get scale 1.
// Affine per-feature map x -> (x - mean) / scale.
struct Standardizer {
  Eigen::RowVectorXd mean;   // offset (the minimum for min-max scaling)
  Eigen::RowVectorXd scale;

  // z-score with population std; constant features get scale 1.
  static Standardizer fit(const Dataset& train);
  // Maps the training range of each feature onto [0, 1].
  static Standardizer fit_min_max(const Dataset& train);
  Dataset apply(const Dataset& data) const;
  std::vector<double> apply(std::span<const double> row) const;
};

}  // namespace vibdiag
