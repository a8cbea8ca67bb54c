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

#include "vibdiag/classifiers/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "vibdiag/error.hpp"

namespace vibdiag {
namespace {

struct Activations {
  Eigen::VectorXd hidden;
  Eigen::VectorXd out;
};

Activations run(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  Activations a;
  a.hidden = (m.w1 * x + m.b1).unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
  Eigen::VectorXd z = m.w2 * a.hidden + m.b2;
  z.array() -= z.maxCoeff();
  a.out = z.array().exp();
  a.out /= a.out.sum();
  return a;
}

// Loss for one sample; accumulates `scale` * gradient into `grad` if given.
double backprop(const MlpModel& m, const Eigen::Ref<const Eigen::VectorXd>& x, int label,
                MlpGradient* grad, double scale) {
  const Activations a = run(m, x);
  const auto k = a.out.size();
  Eigen::VectorXd diff = a.out;
  diff[label] -= 1.0;
  const double loss = diff.squaredNorm();
  if (grad == nullptr) return loss;

  const Eigen::VectorXd dl_do = 2.0 * diff;
  // Softmax Jacobian: dz_j = o_j (g_j - <g, o>).
  const Eigen::VectorXd dz = a.out.cwiseProduct(dl_do.array().matrix() -
                                                Eigen::VectorXd::Constant(k, dl_do.dot(a.out)));
  const Eigen::VectorXd dh =
      (m.w2.transpose() * dz).cwiseProduct(a.hidden.cwiseProduct(
          (Eigen::VectorXd::Ones(a.hidden.size()) - a.hidden)));
  grad->w2.noalias() += scale * dz * a.hidden.transpose();
  grad->b2.noalias() += scale * dz;
  grad->w1.noalias() += scale * dh * x.transpose();
  grad->b1.noalias() += scale * dh;
  return loss;
}

MlpGradient zero_gradient(const MlpModel& m) {
  return {Eigen::MatrixXd::Zero(m.w1.rows(), m.w1.cols()), Eigen::VectorXd::Zero(m.b1.size()),
          Eigen::MatrixXd::Zero(m.w2.rows(), m.w2.cols()), Eigen::VectorXd::Zero(m.b2.size())};
}

void apply_step(MlpModel& m, const MlpGradient& g, double lr) {
  m.w1 -= lr * g.w1;
  m.b1 -= lr * g.b1;
  m.w2 -= lr * g.w2;
  m.b2 -= lr * g.b2;
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

}  // namespace

Eigen::VectorXd MlpModel::forward(std::span<const double> x) const {
  if (x.size() != dim()) throw Error(Errc::DimMismatch, "mlp expects dim " + std::to_string(dim()));
  return run(*this, as_vector(x)).out;
}

FaultClass MlpModel::predict(std::span<const double> x) const {
  const Eigen::VectorXd out = forward(x);
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < out.size(); ++j) {
    if (out[j] > out[best]) best = j;
  }
  return class_from_index(static_cast<int>(best));
}

MlpModel init_mlp(std::size_t dim, const MlpConfig& cfg) {
  if (dim == 0 || cfg.hidden == 0) throw Error(Errc::InvalidConfig, "mlp needs dim, hidden > 0");
  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&rng](Eigen::MatrixXd& w, double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = dist(rng);
  };
  const auto h = static_cast<Eigen::Index>(cfg.hidden);
  MlpModel m;
  m.w1.resize(h, static_cast<Eigen::Index>(dim));
  m.w2.resize(kNumClasses, h);
  uniform(m.w1, 1.0 / std::sqrt(static_cast<double>(dim)));
  uniform(m.w2, 1.0 / std::sqrt(static_cast<double>(cfg.hidden)));
  m.b1 = Eigen::VectorXd::Zero(h);
  m.b2 = Eigen::VectorXd::Zero(kNumClasses);
  return m;
}

double mlp_sample_loss(const MlpModel& model, std::span<const double> x, FaultClass label) {
  if (x.size() != model.dim()) throw Error(Errc::DimMismatch, "mlp input dim");
  return backprop(model, as_vector(x), class_index(label), nullptr, 0.0);
}

double mlp_loss(const MlpModel& model, const Dataset& data, MlpGradient* grad) {
  data.validate();
  if (data.dim() != model.dim()) throw Error(Errc::DimMismatch, "mlp input dim");
  if (grad != nullptr) *grad = zero_gradient(model);
  const double scale = 1.0 / static_cast<double>(data.size());
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    total += backprop(model, as_vector(data.row(i)), class_index(data.labels[i]), grad, scale);
  }
  return total * scale;
}

MlpModel train_bp(const Dataset& data, const MlpConfig& cfg) {
  data.validate();
  if (cfg.iterations < 0 || !(cfg.learning_rate > 0.0) || cfg.trace_every < 1) {
    throw Error(Errc::InvalidConfig, "iterations >= 0, learning_rate > 0, trace_every >= 1");
  }
  MlpModel m = init_mlp(data.dim(), cfg);
  // Sample draws use a stream separate from initialization.
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  MlpGradient g = zero_gradient(m);
  double window = 0.0;
  for (std::int64_t it = 0; it < cfg.iterations; ++it) {
    double loss = 0.0;
    if (cfg.mode == MlpMode::FullBatch) {
      loss = mlp_loss(m, data, &g);
    } else {
      const std::size_t i = pick(rng);
      g.w1.setZero();
      g.b1.setZero();
      g.w2.setZero();
      g.b2.setZero();
      loss = backprop(m, as_vector(data.row(i)), class_index(data.labels[i]), &g, 1.0);
    }
    if (!std::isfinite(loss)) {
      throw Error(Errc::DivergedLoss, "non-finite loss at iteration " + std::to_string(it));
    }
    apply_step(m, g, cfg.learning_rate);
    window += loss;
    if ((it + 1) % cfg.trace_every == 0) {
      m.loss_trace.push_back(cfg.mode == MlpMode::FullBatch ? loss
                                                           : window / static_cast<double>(cfg.trace_every));
      window = 0.0;
    }
  }
  return m;
}

}  // namespace vibdiag
