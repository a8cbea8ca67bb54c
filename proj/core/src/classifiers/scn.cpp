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

#include "vibdiag/classifiers/scn.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/QR>

#include "vibdiag/error.hpp"

namespace vibdiag {
namespace {

Eigen::VectorXd logistic(const Eigen::VectorXd& z) {
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

// argmin ||H beta - T||^2 + ridge ||beta||^2 via QR of the augmented system.
Eigen::MatrixXd solve_output_weights(const Eigen::MatrixXd& h, const Eigen::MatrixXd& t,
                                     double ridge) {
  const auto n = h.rows();
  const auto m = h.cols();
  Eigen::MatrixXd a(n + m, m);
  a.topRows(n) = h;
  a.bottomRows(m) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + m, t.cols());
  rhs.topRows(n) = t;
  return a.colPivHouseholderQr().solve(rhs);
}

}  // namespace

Eigen::VectorXd ScnModel::outputs(std::span<const double> x) const {
  if (x.size() != dim()) throw Error(Errc::DimMismatch, "scn expects dim " + std::to_string(dim()));
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return beta.transpose() * logistic(w * v + b);
}

FaultClass ScnModel::predict(std::span<const double> x) const {
  const Eigen::VectorXd out = outputs(x);
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < out.size(); ++j) {
    if (out[j] > out[best]) best = j;
  }
  return class_from_index(static_cast<int>(best));
}

ScnModel fit_scn(const FeatureMatrix& inputs, const Eigen::MatrixXd& targets,
                 const ScnConfig& cfg) {
  if (inputs.rows() == 0) throw Error(Errc::EmptyDataset, "no training rows");
  if (targets.rows() != inputs.rows()) throw Error(Errc::DimMismatch, "targets rows");
  if (cfg.max_nodes == 0 || cfg.candidate_pool == 0 || cfg.scales.empty() ||
      cfg.r_values.empty() || !(cfg.ridge >= 0.0)) {
    throw Error(Errc::InvalidConfig, "scn needs nodes, pool, scales and r values");
  }
  const auto n = inputs.rows();
  const auto d = inputs.cols();
  const auto outs = targets.cols();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  ScnModel model;
  model.w.resize(0, d);
  model.b.resize(0);
  Eigen::MatrixXd hidden(n, 0);
  Eigen::MatrixXd residual = targets;
  model.stop_reason = "max_nodes";

  while (static_cast<std::size_t>(hidden.cols()) < cfg.max_nodes) {
    bool found = false;
    Eigen::VectorXd best_w;
    double best_b = 0.0;
    Eigen::VectorXd best_g;
    double best_score = -std::numeric_limits<double>::infinity();

    for (double scale : cfg.scales) {
      // One pool per scale, re-screened with each successively looser r.
      std::vector<Eigen::VectorXd> pool_w(cfg.candidate_pool);
      std::vector<double> pool_b(cfg.candidate_pool);
      std::vector<Eigen::VectorXd> pool_g(cfg.candidate_pool);
      for (std::size_t c = 0; c < cfg.candidate_pool; ++c) {
        pool_w[c].resize(d);
        for (Eigen::Index k = 0; k < d; ++k) pool_w[c][k] = scale * unit(rng);
        pool_b[c] = scale * unit(rng);
        pool_g[c] = logistic(((inputs * pool_w[c]).array() + pool_b[c]).matrix());
      }
      if (!cfg.supervisory) {
        best_w = pool_w[0];
        best_b = pool_b[0];
        best_g = pool_g[0];
        found = true;
        break;
      }
      for (double r : cfg.r_values) {
        for (std::size_t c = 0; c < cfg.candidate_pool; ++c) {
          const Eigen::VectorXd& g = pool_g[c];
          const double gg = g.squaredNorm();
          if (!(gg > 0.0)) continue;
          double worst = std::numeric_limits<double>::infinity();
          double total = 0.0;
          for (Eigen::Index q = 0; q < outs; ++q) {
            const double eg = residual.col(q).dot(g);
            const double xi = eg * eg / gg - (1.0 - r) * residual.col(q).squaredNorm();
            worst = std::min(worst, xi);
            total += xi;
          }
          if (worst >= 0.0 && total > best_score) {
            best_score = total;
            best_w = pool_w[c];
            best_b = pool_b[c];
            best_g = g;
            found = true;
          }
        }
        if (found) break;
      }
      if (found) break;
    }

    if (!found) {
      if (hidden.cols() == 0) {
        throw Error(Errc::NoAcceptableCandidate, "no admissible first node");
      }
      model.stop_reason = "no_candidate";
      break;
    }

    const auto m = hidden.cols();
    hidden.conservativeResize(Eigen::NoChange, m + 1);
    hidden.col(m) = best_g;
    model.w.conservativeResize(m + 1, Eigen::NoChange);
    model.w.row(m) = best_w.transpose();
    model.b.conservativeResize(m + 1);
    model.b[m] = best_b;
    model.beta = solve_output_weights(hidden, targets, cfg.ridge);
    residual = targets - hidden * model.beta;
    const double norm = residual.norm();
    model.residual_trace.push_back(norm);
    if (norm / std::sqrt(static_cast<double>(n * outs)) < cfg.tol) {
      model.stop_reason = "tolerance";
      break;
    }
  }
  return model;
}

ScnModel train_scn(const Dataset& data, const ScnConfig& cfg) {
  data.validate();
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(data.size()), kNumClasses);
  for (std::size_t i = 0; i < data.size(); ++i) {
    targets(static_cast<Eigen::Index>(i), class_index(data.labels[i])) = 1.0;
  }
  return fit_scn(data.features, targets, cfg);
}

}  // namespace vibdiag
