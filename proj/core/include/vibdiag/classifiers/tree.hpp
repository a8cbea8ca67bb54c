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

#include "vibdiag/dataset.hpp"

namespace vibdiag {

enum class SplitCriterion { Entropy, Gini };

struct TreeConfig {
  SplitCriterion criterion = SplitCriterion::Entropy;
  int max_depth = 32;
  std::size_t min_node_size = 1;  // minimum samples on each side of a split
};

// Internal nodes route x[feature] <= threshold to `left`.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  FaultClass label = FaultClass::Normal;

  bool is_leaf() const noexcept { return feature < 0; }
};

struct TreeModel {
  std::size_t dim = 0;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  FaultClass predict(std::span<const double> x) const;
  int depth() const;
};

// Entropy in bits of a class histogram.
double entropy_bits(const ClassCounts& counts);
// Sample-weighted entropy (or Gini impurity) of a binary partition.
double split_score(const ClassCounts& left, const ClassCounts& right, SplitCriterion criterion);

struct CandidateSplit {
  double threshold = 0.0;
  double score = 0.0;
};

// Every midpoint threshold on `feature` over rows `indices`, ascending.
std::vector<CandidateSplit> candidate_splits(const Dataset& data,
                                             std::span<const std::size_t> indices,
                                             std::size_t feature, SplitCriterion criterion,
                                             std::size_t min_node_size = 1);

TreeModel train_tree(const Dataset& data, const TreeConfig& cfg = {});

}  // namespace vibdiag
