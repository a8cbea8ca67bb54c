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

#include "vibdiag/classifiers/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>
#include <unordered_map>

#include "vibdiag/error.hpp"

namespace vibdiag {
namespace {

constexpr double kTau = 1e-12;

// Columns of Q_ij = y_i y_j K(x_i, x_j), computed on demand. The whole matrix
// is kept when it fits the budget; otherwise least-recently-used columns are
// evicted.
class KernelColumns {
 public:
  KernelColumns(const FeatureMatrix& x, const std::vector<int>& y, double gamma,
                std::size_t budget_bytes)
      : x_(x), y_(y), gamma_(gamma), n_(y.size()) {
    const std::size_t col_bytes = std::max<std::size_t>(1, n_ * sizeof(double));
    capacity_ = std::max<std::size_t>(2, budget_bytes / col_bytes);
    diag_.resize(n_, 1.0);
  }

  const std::vector<double>& column(std::size_t i) {
    if (auto it = cache_.find(i); it != cache_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second.second);
      return it->second.first;
    }
    if (cache_.size() >= capacity_) {
      cache_.erase(lru_.back());
      lru_.pop_back();
    }
    std::vector<double> col(n_);
    const std::span<const double> xi(x_.data() + i * x_.cols(), static_cast<std::size_t>(x_.cols()));
    for (std::size_t j = 0; j < n_; ++j) {
      const std::span<const double> xj(x_.data() + j * x_.cols(),
                                       static_cast<std::size_t>(x_.cols()));
      col[j] = static_cast<double>(y_[i] * y_[j]) * rbf_kernel(xi, xj, gamma_);
    }
    lru_.push_front(i);
    auto [pos, inserted] = cache_.emplace(i, std::make_pair(std::move(col), lru_.begin()));
    return pos->second.first;
  }

  double diag(std::size_t i) const { return diag_[i]; }

 private:
  const FeatureMatrix& x_;
  const std::vector<int>& y_;
  double gamma_;
  std::size_t n_;
  std::size_t capacity_;
  std::vector<double> diag_;
  std::list<std::size_t> lru_;
  std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>>
      cache_;
};

}  // namespace

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double BinarySvm::decision(std::span<const double> x, double gamma) const {
  const auto dim = static_cast<std::size_t>(support_vectors.cols());
  double f = bias;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const std::span<const double> sv(support_vectors.data() + i * dim, dim);
    f += alpha[i] * y[i] * rbf_kernel(sv, x, gamma);
  }
  return f;
}

FaultClass SvmModel::predict(std::span<const double> x) const {
  if (x.size() != dim) throw Error(Errc::DimMismatch, "svm expects dim " + std::to_string(dim));
  if (machines.empty()) throw Error(Errc::InvalidConfig, "svm has no machines");
  ClassCounts votes{};
  for (const auto& m : machines) {
    const FaultClass winner = m.decision(x, gamma) > 0.0 ? m.positive : m.negative;
    ++votes[static_cast<std::size_t>(class_index(winner))];
  }
  const auto it = std::max_element(votes.begin(), votes.end());
  return class_from_index(static_cast<int>(it - votes.begin()));
}

BinarySvm train_binary_svm(const Dataset& data, FaultClass positive, FaultClass negative,
                           const SvmConfig& cfg) {
  if (!(cfg.gamma > 0.0) || !(cfg.c > 0.0) || !(cfg.tol > 0.0) || cfg.max_iter < 1) {
    throw Error(Errc::InvalidConfig, "svm gamma, C, tol and max_iter must be positive");
  }
  std::vector<std::size_t> rows;
  std::vector<int> y;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] == positive || data.labels[i] == negative) {
      rows.push_back(i);
      y.push_back(data.labels[i] == positive ? 1 : -1);
    }
  }
  const Dataset pair = data.subset(rows);
  const std::size_t n = rows.size();
  if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), -1) == 0) {
    throw Error(Errc::SingleClass, "binary problem needs both classes");
  }

  const double c = cfg.c;
  KernelColumns q(pair.features, y, cfg.gamma, cfg.cache_mb * 1024 * 1024);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 0.5 a'Qa - e'a
  auto in_up = [&](std::size_t t) { return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0.0); };
  auto in_low = [&](std::size_t t) { return (y[t] > 0 && alpha[t] > 0.0) || (y[t] < 0 && alpha[t] < c); };

  BinarySvm out;
  out.positive = positive;
  out.negative = negative;
  for (; out.iterations < cfg.max_iter; ++out.iterations) {
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n;
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    if (i == n || j == n || g_max - g_min < cfg.tol) {
      out.converged = true;
      break;
    }

    const std::vector<double>& qi = q.column(i);
    const std::vector<double>& qj = q.column(j);
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = q.diag(i) + q.diag(j) + 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = q.diag(i) + q.diag(j) - 2.0 * qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_ai;
    const double dj = alpha[j] - old_aj;
    // qj may be evicted by fetching qi only if capacity < 2, which KernelColumns forbids.
    for (std::size_t t = 0; t < n; ++t) grad[t] += qi[t] * di + qj[t] * dj;
  }

  // Offset from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  out.bias = -rho;

  std::vector<std::size_t> sv;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) sv.push_back(t);
  }
  out.support_vectors = pair.subset(sv).features;
  for (std::size_t t : sv) {
    out.alpha.push_back(alpha[t]);
    out.y.push_back(y[t]);
  }
  return out;
}

SvmModel train_svm(const Dataset& data, const SvmConfig& cfg) {
  data.validate(2);
  SvmModel model;
  model.dim = data.dim();
  model.gamma = cfg.gamma;
  model.c = cfg.c;
  const auto counts = data.class_counts();
  for (int a = 0; a < kNumClasses; ++a) {
    for (int b = a + 1; b < kNumClasses; ++b) {
      if (counts[static_cast<std::size_t>(a)] == 0 || counts[static_cast<std::size_t>(b)] == 0) {
        continue;
      }
      model.machines.push_back(
          train_binary_svm(data, class_from_index(a), class_from_index(b), cfg));
    }
  }
  return model;
}

}  // namespace vibdiag
