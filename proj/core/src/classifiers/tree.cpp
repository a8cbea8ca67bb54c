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

#include "vibdiag/classifiers/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vibdiag/error.hpp"

namespace vibdiag {
namespace {

FaultClass majority(const ClassCounts& counts) {
  // max_element returns the first maximum, i.e. the lowest class index.
  const auto it = std::max_element(counts.begin(), counts.end());
  return class_from_index(static_cast<int>(it - counts.begin()));
}

bool is_pure(const ClassCounts& counts) {
  return std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) <= 1;
}

double gini(const ClassCounts& counts) {
  const auto total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) return 0.0;
  double sum_sq = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

class Builder {
 public:
  Builder(const Dataset& data, const TreeConfig& cfg) : data_(data), cfg_(cfg) {}

  int grow(std::vector<std::size_t> indices, int depth) {
    ClassCounts counts{};
    for (std::size_t i : indices) ++counts[static_cast<std::size_t>(class_index(data_.labels[i]))];
    const int id = static_cast<int>(model_.nodes.size());
    model_.nodes.push_back(TreeNode{-1, 0.0, -1, -1, majority(counts)});
    if (is_pure(counts) || depth >= cfg_.max_depth) return id;

    int best_feature = -1;
    CandidateSplit best{0.0, std::numeric_limits<double>::infinity()};
    for (std::size_t f = 0; f < data_.dim(); ++f) {
      for (const auto& c : candidate_splits(data_, indices, f, cfg_.criterion, cfg_.min_node_size)) {
        if (c.score < best.score) {
          best = c;
          best_feature = static_cast<int>(f);
        }
      }
    }
    // No threshold separates these rows: they share every feature value.
    if (best_feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    const auto f = static_cast<std::size_t>(best_feature);
    for (std::size_t i : indices) {
      (data_.row(i)[f] <= best.threshold ? left : right).push_back(i);
    }
    indices.clear();
    indices.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    auto& node = model_.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  TreeModel take() && {
    model_.dim = data_.dim();
    return std::move(model_);
  }

 private:
  const Dataset& data_;
  const TreeConfig& cfg_;
  TreeModel model_;
};

}  // namespace

FaultClass TreeModel::predict(std::span<const double> x) const {
  if (x.size() != dim) throw Error(Errc::DimMismatch, "tree expects dim " + std::to_string(dim));
  if (nodes.empty()) throw Error(Errc::InvalidConfig, "empty tree");
  std::size_t at = 0;
  while (!nodes[at].is_leaf()) {
    const auto& n = nodes[at];
    at = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                       : n.right);
  }
  return nodes[at].label;
}

int TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  int deepest = 0;
  while (!stack.empty()) {
    auto [at, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[at].is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(nodes[at].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes[at].right), d + 1);
    }
  }
  return deepest;
}

double entropy_bits(const ClassCounts& counts) {
  const auto total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

double split_score(const ClassCounts& left, const ClassCounts& right, SplitCriterion criterion) {
  const auto nl = static_cast<double>(std::accumulate(left.begin(), left.end(), std::size_t{0}));
  const auto nr = static_cast<double>(std::accumulate(right.begin(), right.end(), std::size_t{0}));
  const double n = nl + nr;
  if (n == 0.0) return 0.0;
  if (criterion == SplitCriterion::Entropy) {
    return (nl / n) * entropy_bits(left) + (nr / n) * entropy_bits(right);
  }
  return (nl / n) * gini(left) + (nr / n) * gini(right);
}

std::vector<CandidateSplit> candidate_splits(const Dataset& data,
                                             std::span<const std::size_t> indices,
                                             std::size_t feature, SplitCriterion criterion,
                                             std::size_t min_node_size) {
  std::vector<std::size_t> order(indices.begin(), indices.end());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.row(a)[feature] < data.row(b)[feature];
  });
  ClassCounts left{};
  ClassCounts right{};
  for (std::size_t i : order) ++right[static_cast<std::size_t>(class_index(data.labels[i]))];

  std::vector<CandidateSplit> out;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const auto c = static_cast<std::size_t>(class_index(data.labels[order[k]]));
    ++left[c];
    --right[c];
    const double lo = data.row(order[k])[feature];
    const double hi = data.row(order[k + 1])[feature];
    if (!(lo < hi)) continue;
    if (k + 1 < min_node_size || order.size() - k - 1 < min_node_size) continue;
    double mid = lo + (hi - lo) / 2.0;
    if (!(mid < hi)) mid = lo;
    out.push_back({mid, split_score(left, right, criterion)});
  }
  return out;
}

TreeModel train_tree(const Dataset& data, const TreeConfig& cfg) {
  data.validate();
  if (cfg.max_depth < 0 || cfg.min_node_size < 1) {
    throw Error(Errc::InvalidConfig, "max_depth >= 0 and min_node_size >= 1 required");
  }
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  Builder builder(data, cfg);
  builder.grow(std::move(all), 0);
  return std::move(builder).take();
}

}  // namespace vibdiag
