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

#include <Eigen/Core>

#include "vibdiag/framing.hpp"

namespace vibdiag {

inline constexpr int kMinTerms = 2;
inline constexpr int kMaxTerms = 7;

struct GaussianTerm {
  double amplitude = 0.0;
  double center = 0.0;  // normalized abscissa, frame spans [0, 1]
  double width = 1.0;   // > 0
};

// f(x) = sum_i A_i exp(-((x - mu_i) / sigma_i)^2)
struct GaussianModel {
  std::vector<GaussianTerm> terms;

  std::size_t size() const noexcept { return terms.size(); }
  // Sort by center, then width, then amplitude.
  void canonicalize();
  bool is_canonical() const;
  void validate() const;
};

double eval_gauss(const GaussianModel& model, double x);

// Partial derivatives with respect to (A_1, mu_1, sigma_1, ..., A_n, mu_n,
// sigma_n); one row per abscissa.
Eigen::MatrixXd gauss_jacobian(const GaussianModel& model, std::span<const double> xs);

double sum_squared_error(const GaussianModel& model, std::span<const double> xs,
                         std::span<const double> ys);

enum class FitTarget {
  Raw,       // samples as given
  Abs,       // rectified
  Envelope,  // rectified then moving-average smoothed
};

struct FitConfig {
  int n_terms = 2;
  int max_iter = 200;
  double tol_step = 1e-10;
  double tol_grad = 1e-10;
  double lm_lambda0 = 1e-3;
  FitTarget target = FitTarget::Raw;
  bool hamming_taper = false;

  void validate() const;
};

struct FitResult {
  GaussianModel model;
  double sse = 0.0;
  double initial_sse = 0.0;
  int iterations = 0;
  bool converged = false;
  // sse of the starting point followed by every accepted iterate.
  std::vector<double> sse_trace;
};

// x_i = i / (len - 1).
std::vector<double> fit_abscissa(std::size_t len);

// Values the model is fit against after taper and target transform.
std::vector<double> fit_target_values(std::span<const double> samples, const FitConfig& cfg);

// Peak-picking start point: the n largest-magnitude interior extrema that are
// at least len/(2n) samples apart. Each width is the 1/e half-extent of its
// lobe, capped at 1/(2n). Missing terms go on the uniform grid (2j+1)/(2n)
// with width 1/(2n).
GaussianModel init_params(std::span<const double> values, int n);

// Levenberg-Marquardt on the sum of squared residuals. Widths are optimized
// in log space. Non-convergence returns the best iterate with
// converged == false.
FitResult fit_gaussians(std::span<const double> samples, const FitConfig& cfg);
// Same, starting from `initial` (must have cfg.n_terms terms) instead of
// init_params. `samples` still go through fit_target_values.
FitResult fit_gaussians(std::span<const double> samples, const FitConfig& cfg,
                        const GaussianModel& initial);
inline FitResult fit_gaussians(const Frame& frame, const FitConfig& cfg) {
  return fit_gaussians(std::span<const double>(frame.samples), cfg);
}

// [A_1, mu_1, sigma_1, ..., A_n, mu_n, sigma_n] in canonical order.
std::vector<double> parametric_features(const GaussianModel& model);
inline std::vector<double> parametric_features(const FitResult& result) {
  return parametric_features(result.model);
}

}  // namespace vibdiag
