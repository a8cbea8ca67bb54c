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

#include <Eigen/Core>

#include "vibdiag/dataset.hpp"

namespace vibdiag {

enum class MlpMode {
  Stochastic,  // one uniformly drawn sample per update
  FullBatch,   // exact gradient of the mean loss per update
};

struct MlpConfig {
  std::size_t hidden = 40;
  double learning_rate = 0.0075;
  std::int64_t iterations = 200000;
  std::uint64_t seed = 1;
  MlpMode mode = MlpMode::Stochastic;
  // Loss trace resolution: one entry per `trace_every` updates (mean of the
  // per-update losses in stochastic mode, batch loss in full-batch mode).
  std::int64_t trace_every = 1000;
};

// dim -> hidden (logistic) -> 5 (softmax); per-sample loss is the squared
// error ||softmax - onehot||^2 summed over the outputs.
struct MlpModel {
  Eigen::MatrixXd w1;  // hidden x dim
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // 5 x hidden
  Eigen::VectorXd b2;
  std::vector<double> loss_trace;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(w1.cols()); }
  Eigen::VectorXd forward(std::span<const double> x) const;
  FaultClass predict(std::span<const double> x) const;
};

struct MlpGradient {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

// Weights uniform on +-1/sqrt(fan_in), biases zero.
MlpModel init_mlp(std::size_t dim, const MlpConfig& cfg);

double mlp_sample_loss(const MlpModel& model, std::span<const double> x, FaultClass label);
// Mean loss over `data`; fills `grad` with its exact gradient when non-null.
double mlp_loss(const MlpModel& model, const Dataset& data, MlpGradient* grad = nullptr);

MlpModel train_bp(const Dataset& data, const MlpConfig& cfg = {});

}  // namespace vibdiag
