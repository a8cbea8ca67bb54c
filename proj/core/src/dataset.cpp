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

#include "vibdiag/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vibdiag/error.hpp"

namespace vibdiag {

ClassCounts Dataset::class_counts() const {
  ClassCounts counts{};
  for (FaultClass c : labels) ++counts[static_cast<std::size_t>(class_index(c))];
  return counts;
}

std::size_t Dataset::distinct_classes() const {
  const auto counts = class_counts();
  return static_cast<std::size_t>(
      std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
  out.labels.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.features.row(static_cast<Eigen::Index>(k)) =
        features.row(static_cast<Eigen::Index>(indices[k]));
    out.labels.push_back(labels[indices[k]]);
  }
  return out;
}

void Dataset::validate(std::size_t min_classes) const {
  if (labels.empty()) throw Error(Errc::EmptyDataset, "dataset has no samples");
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(Errc::DimMismatch, "feature rows differ from label count");
  }
  if (!features.allFinite()) throw Error(Errc::NonFiniteInput, "non-finite feature value");
  if (distinct_classes() < min_classes) {
    throw Error(Errc::SingleClass, "need " + std::to_string(min_classes) + " distinct classes");
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows,
                           std::vector<FaultClass> labels) {
  if (rows.size() != labels.size()) throw Error(Errc::DimMismatch, "rows vs labels");
  Dataset out;
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  out.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim) throw Error(Errc::DimMismatch, "ragged feature rows");
    for (std::size_t j = 0; j < dim; ++j) {
      out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  out.labels = std::move(labels);
  return out;
}

Standardizer Standardizer::fit(const Dataset& train) {
  train.validate();
  Standardizer s;
  const auto n = static_cast<double>(train.size());
  s.mean = train.features.colwise().sum() / n;
  s.scale.resize(train.features.cols());
  for (Eigen::Index j = 0; j < train.features.cols(); ++j) {
    const double var = (train.features.col(j).array() - s.mean[j]).square().sum() / n;
    const double sd = std::sqrt(var);
    s.scale[j] = sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
  }
  return s;
}

Standardizer Standardizer::fit_min_max(const Dataset& train) {
  train.validate();
  Standardizer s;
  s.mean = train.features.colwise().minCoeff();
  s.scale = train.features.colwise().maxCoeff() - s.mean;
  for (Eigen::Index j = 0; j < s.scale.size(); ++j) {
    if (!(s.scale[j] > 0.0)) s.scale[j] = 1.0;
  }
  return s;
}

Dataset Standardizer::apply(const Dataset& data) const {
  if (data.features.cols() != mean.size()) throw Error(Errc::DimMismatch, "standardizer dim");
  Dataset out = data;
  out.features = ((data.features.rowwise() - mean).array().rowwise() / scale.array()).matrix();
  return out;
}

std::vector<double> Standardizer::apply(std::span<const double> row) const {
  if (static_cast<Eigen::Index>(row.size()) != mean.size()) {
    throw Error(Errc::DimMismatch, "standardizer dim");
  }
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    out[j] = (row[j] - mean[k]) / scale[k];
  }
  return out;
}

}  // namespace vibdiag
