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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vibdiag/dataset.hpp"

namespace vibdiag {

struct ScnConfig {
  std::size_t max_nodes = 40;
  std::size_t candidate_pool = 30;
  std::vector<double> scales = {1.0, 5.0, 10.0, 50.0, 100.0};
  std::vector<double> r_values = {0.9, 0.99, 0.999, 0.9999, 0.99999, 0.999999};
  double tol = 1e-6;         // stop once the training RMSE falls below this
  bool supervisory = true;   // false: accept the first random candidate
  double ridge = 0.0;        // output-weight regularization; 0 = plain least squares
  std::uint64_t seed = 1;
};

// Single hidden layer of logistic nodes with frozen random input weights and
// least-squares output weights.
struct ScnModel {
  Eigen::MatrixXd w;     // nodes x dim
  Eigen::VectorXd b;     // nodes
  Eigen::MatrixXd beta;  // nodes x outputs
  // Frobenius norm of the training residual after each accepted node.
  std::vector<double> residual_trace;
  std::string stop_reason;  // "max_nodes", "tolerance" or "no_candidate"

  std::size_t dim() const noexcept { return static_cast<std::size_t>(w.cols()); }
  std::size_t nodes() const noexcept { return static_cast<std::size_t>(w.rows()); }
  Eigen::VectorXd outputs(std::span<const double> x) const;
  // Argmax over outputs, lowest index on ties.
  FaultClass predict(std::span<const double> x) const;
};

// Incremental construction for arbitrary targets (rows = samples). A node is
// accepted when <e_q, g>^2 / <g, g> >= (1 - r) ||e_q||^2 holds for every
// output q; among admissible candidates the largest summed margin wins.
// Throws NoAcceptableCandidate if not even the first node can be placed.
ScnModel fit_scn(const FeatureMatrix& inputs, const Eigen::MatrixXd& targets,
                 const ScnConfig& cfg = {});

// Classification on one-hot targets over the five fault classes.
ScnModel train_scn(const Dataset& data, const ScnConfig& cfg = {});

}  // namespace vibdiag
