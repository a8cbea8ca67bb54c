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

#include "vibdiag/gaussfit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

#include <Eigen/Cholesky>

#include "vibdiag/error.hpp"

namespace vibdiag {
namespace {

constexpr double kMaxLambda = 1e16;
constexpr int kMaxDampingRetries = 40;
constexpr double kAmplitudeBound = 3.0;  // times max |y|
// Feasible box for (A, mu, log sigma). Trial points are projected onto it.
struct Box {
  double max_amplitude;
  double min_log_width;
  double max_log_width = 0.0;  // sigma <= 1, the whole frame
};

Box make_box(std::span<const double> ys) {
  double peak = 0.0;
  for (double v : ys) peak = std::max(peak, std::abs(v));
  const double spacing = ys.size() > 1 ? 1.0 / static_cast<double>(ys.size() - 1) : 1.0;
  return {kAmplitudeBound * peak, std::log(spacing)};
}

void project(Eigen::VectorXd& theta, const Box& box) {
  for (Eigen::Index t = 0; t + 2 < theta.size(); t += 3) {
    theta[t] = std::clamp(theta[t], -box.max_amplitude, box.max_amplitude);
    theta[t + 1] = std::clamp(theta[t + 1], 0.0, 1.0);
    theta[t + 2] = std::clamp(theta[t + 2], box.min_log_width, box.max_log_width);
  }
}

auto term_key(const GaussianTerm& t) { return std::tie(t.center, t.width, t.amplitude); }

// Internal parameter vector: (A, mu, log sigma) per term.
Eigen::VectorXd pack(const GaussianModel& m) {
  Eigen::VectorXd theta(3 * static_cast<Eigen::Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto j = 3 * static_cast<Eigen::Index>(i);
    theta[j] = m.terms[i].amplitude;
    theta[j + 1] = m.terms[i].center;
    theta[j + 2] = std::log(m.terms[i].width);
  }
  return theta;
}

GaussianModel unpack(const Eigen::VectorXd& theta) {
  GaussianModel m;
  m.terms.resize(static_cast<std::size_t>(theta.size() / 3));
  for (std::size_t i = 0; i < m.terms.size(); ++i) {
    const auto j = 3 * static_cast<Eigen::Index>(i);
    m.terms[i] = {theta[j], theta[j + 1], std::exp(theta[j + 2])};
  }
  return m;
}

double sse_of(const Eigen::VectorXd& theta, std::span<const double> xs,
              std::span<const double> ys) {
  const auto n = theta.size() / 3;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      const double z = (xs[i] - theta[3 * t + 1]) * std::exp(-theta[3 * t + 2]);
      f += theta[3 * t] * std::exp(-z * z);
    }
    const double r = f - ys[i];
    sse += r * r;
  }
  return sse;
}

// Residuals and Jacobian in the internal (A, mu, log sigma) parametrization.
void residual_and_jacobian(const Eigen::VectorXd& theta, std::span<const double> xs,
                           std::span<const double> ys, Eigen::VectorXd& r,
                           Eigen::MatrixXd& jac) {
  const auto n = theta.size() / 3;
  const auto rows = static_cast<Eigen::Index>(xs.size());
  r.resize(rows);
  jac.resize(rows, theta.size());
  for (Eigen::Index i = 0; i < rows; ++i) {
    double f = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      const double a = theta[3 * t];
      const double inv_sigma = std::exp(-theta[3 * t + 2]);
      const double z = (xs[static_cast<std::size_t>(i)] - theta[3 * t + 1]) * inv_sigma;
      const double e = std::exp(-z * z);
      f += a * e;
      jac(i, 3 * t) = e;
      jac(i, 3 * t + 1) = a * e * 2.0 * z * inv_sigma;
      jac(i, 3 * t + 2) = a * e * 2.0 * z * z;
    }
    r[i] = f - ys[static_cast<std::size_t>(i)];
  }
}

std::vector<std::size_t> local_extrema(std::span<const double> v) {
  std::vector<std::size_t> idx;
  // Plateaus count once, at their right edge.
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const bool is_max = v[i] >= v[i - 1] && v[i] > v[i + 1];
    const bool is_min = v[i] <= v[i - 1] && v[i] < v[i + 1];
    if (is_max || is_min) idx.push_back(i);
  }
  return idx;
}

// Half the extent of the same-signed lobe around `peak` where |v| stays above
// |v[peak]| / e, in abscissa units, clamped to [1 / (len - 1), cap].
double lobe_width(std::span<const double> v, std::size_t peak, double cap) {
  const double apex = v[peak];
  const double level = std::abs(apex) / std::numbers::e;
  auto inside = [&](std::size_t i) { return std::abs(v[i]) > level && v[i] * apex > 0.0; };
  std::size_t lo = peak;
  std::size_t hi = peak;
  while (lo > 0 && inside(lo - 1)) --lo;
  while (hi + 1 < v.size() && inside(hi + 1)) ++hi;
  const double span_len = static_cast<double>(v.size() - 1);
  return std::clamp(0.5 * static_cast<double>(hi - lo + 1) / span_len, 1.0 / span_len, cap);
}

}  // namespace

void GaussianModel::canonicalize() {
  std::sort(terms.begin(), terms.end(),
            [](const GaussianTerm& a, const GaussianTerm& b) { return term_key(a) < term_key(b); });
}

bool GaussianModel::is_canonical() const {
  return std::is_sorted(terms.begin(), terms.end(), [](const GaussianTerm& a, const GaussianTerm& b) {
    return term_key(a) < term_key(b);
  });
}

void GaussianModel::validate() const {
  if (terms.empty()) throw Error(Errc::InvalidConfig, "model has no terms");
  for (const auto& t : terms) {
    if (!(t.width > 0.0) || !std::isfinite(t.width) || !std::isfinite(t.amplitude) ||
        !std::isfinite(t.center)) {
      throw Error(Errc::InvalidConfig, "term widths must be positive and all values finite");
    }
  }
}

double eval_gauss(const GaussianModel& model, double x) {
  double f = 0.0;
  for (const auto& t : model.terms) {
    const double z = (x - t.center) / t.width;
    f += t.amplitude * std::exp(-z * z);
  }
  return f;
}

Eigen::MatrixXd gauss_jacobian(const GaussianModel& model, std::span<const double> xs) {
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(xs.size()),
                      3 * static_cast<Eigen::Index>(model.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t t = 0; t < model.size(); ++t) {
      const auto& g = model.terms[t];
      const double d = xs[i] - g.center;
      const double e = std::exp(-(d * d) / (g.width * g.width));
      const auto row = static_cast<Eigen::Index>(i);
      const auto col = 3 * static_cast<Eigen::Index>(t);
      jac(row, col) = e;
      jac(row, col + 1) = g.amplitude * e * 2.0 * d / (g.width * g.width);
      jac(row, col + 2) = g.amplitude * e * 2.0 * d * d / (g.width * g.width * g.width);
    }
  }
  return jac;
}

double sum_squared_error(const GaussianModel& model, std::span<const double> xs,
                         std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(Errc::DimMismatch, "abscissa/ordinate length");
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = eval_gauss(model, xs[i]) - ys[i];
    sse += r * r;
  }
  return sse;
}

void FitConfig::validate() const {
  if (n_terms < kMinTerms || n_terms > kMaxTerms) {
    throw Error(Errc::InvalidConfig, "n_terms must be in [2, 7]");
  }
  if (max_iter < 0) throw Error(Errc::InvalidConfig, "max_iter must be >= 0");
  if (!(tol_step > 0.0) || !(tol_grad > 0.0) || !(lm_lambda0 > 0.0)) {
    throw Error(Errc::InvalidConfig, "tolerances and lm_lambda0 must be positive");
  }
}

std::vector<double> fit_abscissa(std::size_t len) {
  std::vector<double> xs(len);
  const double denom = len > 1 ? static_cast<double>(len - 1) : 1.0;
  for (std::size_t i = 0; i < len; ++i) xs[i] = static_cast<double>(i) / denom;
  return xs;
}

std::vector<double> fit_target_values(std::span<const double> samples, const FitConfig& cfg) {
  std::vector<double> y(samples.begin(), samples.end());
  if (cfg.hamming_taper && y.size() >= 2) {
    const auto w = hamming_coeffs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] *= w[i];
  }
  if (cfg.target == FitTarget::Raw) return y;
  for (double& v : y) v = std::abs(v);
  if (cfg.target == FitTarget::Abs) return y;

  const std::size_t half = std::max<std::size_t>(1, y.size() / 50);
  std::vector<double> prefix(y.size() + 1, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) prefix[i + 1] = prefix[i] + y[i];
  std::vector<double> env(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(y.size(), i + half + 1);
    env[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return env;
}

GaussianModel init_params(std::span<const double> values, int n) {
  if (n < 1) throw Error(Errc::InvalidConfig, "need at least one term");
  const auto terms = static_cast<std::size_t>(n);
  if (values.size() < 3 * terms) {
    throw Error(Errc::FrameTooShortForTerms, std::to_string(values.size()) + " samples for " +
                std::to_string(n) + " terms");
  }
  const std::size_t len = values.size();
  const double span_len = static_cast<double>(len - 1);
  const double min_sep = static_cast<double>(len) / (2.0 * static_cast<double>(n));
  const double width = 1.0 / (2.0 * static_cast<double>(n));

  auto candidates = local_extrema(values);
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a]) > std::abs(values[b]);
  });
  std::vector<std::size_t> picked;
  for (std::size_t c : candidates) {
    if (picked.size() == terms) break;
    const bool far = std::all_of(picked.begin(), picked.end(), [&](std::size_t p) {
      return std::abs(static_cast<double>(c) - static_cast<double>(p)) >= min_sep;
    });
    if (far) picked.push_back(c);
  }

  GaussianModel model;
  for (std::size_t p : picked) {
    model.terms.push_back({values[p], static_cast<double>(p) / span_len, lobe_width(values, p, width)});
  }
  if (picked.size() < terms) {
    // Fill from the uniform grid, farthest-from-picked slots first.
    std::vector<double> slots(terms);
    for (std::size_t j = 0; j < terms; ++j) {
      slots[j] = (2.0 * static_cast<double>(j) + 1.0) / (2.0 * static_cast<double>(n));
    }
    auto gap = [&](double s) {
      double best = 2.0;
      for (const auto& t : model.terms) best = std::min(best, std::abs(s - t.center));
      return best;
    };
    std::stable_sort(slots.begin(), slots.end(),
                     [&](double a, double b) { return gap(a) > gap(b); });
    for (std::size_t j = 0; model.terms.size() < terms; ++j) {
      const auto idx = static_cast<std::size_t>(std::lround(slots[j] * span_len));
      model.terms.push_back({values[idx], slots[j], width});
    }
  }
  model.canonicalize();
  return model;
}

FitResult fit_gaussians(std::span<const double> samples, const FitConfig& cfg) {
  cfg.validate();
  const auto y = fit_target_values(samples, cfg);
  return fit_gaussians(samples, cfg, init_params(y, cfg.n_terms));
}

FitResult fit_gaussians(std::span<const double> samples, const FitConfig& cfg,
                        const GaussianModel& initial) {
  cfg.validate();
  initial.validate();
  if (initial.size() != static_cast<std::size_t>(cfg.n_terms)) {
    throw Error(Errc::InvalidConfig, "initial model size differs from n_terms");
  }
  if (samples.size() < 3 * initial.size()) {
    throw Error(Errc::FrameTooShortForTerms, "frame too short for term count");
  }
  const auto y = fit_target_values(samples, cfg);
  const auto xs = fit_abscissa(y.size());

  const Box box = make_box(y);
  Eigen::VectorXd theta = pack(initial);
  project(theta, box);
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residual_and_jacobian(theta, xs, y, r, jac);
  double sse = r.squaredNorm();
  if (!std::isfinite(sse)) throw Error(Errc::NonFiniteResidual, "initial residual");

  FitResult result;
  result.initial_sse = sse;
  result.sse_trace.push_back(sse);
  double lambda = cfg.lm_lambda0;
  const auto p = theta.size();
  Eigen::MatrixXd normal(p, p);
  Eigen::VectorXd grad(p);

  bool need_jacobian = false;
  while (result.iterations < cfg.max_iter) {
    if (need_jacobian) residual_and_jacobian(theta, xs, y, r, jac);
    need_jacobian = false;
    grad.noalias() = jac.transpose() * r;
    if (grad.lpNorm<Eigen::Infinity>() < cfg.tol_grad) {
      result.converged = true;
      break;
    }
    normal.noalias() = jac.transpose() * jac;
    const Eigen::VectorXd diag = normal.diagonal();
    const double floor = 1e-12 * std::max(1.0, diag.maxCoeff());

    // Inner loop: raise damping until a step lowers the sse.
    bool accepted = false;
    bool small_step = false;
    int retries = 0;
    while (!accepted && result.iterations < cfg.max_iter && lambda < kMaxLambda) {
      Eigen::MatrixXd damped = normal;
      for (Eigen::Index j = 0; j < p; ++j) damped(j, j) += lambda * std::max(diag[j], floor);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
      Eigen::VectorXd step;
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) step = ldlt.solve(-grad);
      if (step.size() != p || !step.allFinite()) {
        if (++retries > kMaxDampingRetries) {
          throw Error(Errc::SingularNormalEquations, "damping retries exhausted");
        }
        lambda *= 10.0;
        continue;
      }
      ++result.iterations;
      Eigen::VectorXd trial = theta + step;
      project(trial, box);
      small_step = (trial - theta).norm() < cfg.tol_step * (1.0 + theta.norm());
      const double trial_sse = sse_of(trial, xs, y);
      if (std::isfinite(trial_sse) && trial_sse < sse) {
        theta = trial;
        sse = trial_sse;
        result.sse_trace.push_back(sse);
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
        need_jacobian = true;
      } else {
        lambda *= 10.0;
      }
      if (small_step) break;
    }
    if (small_step) {
      result.converged = true;
      break;
    }
    if (!accepted) break;
  }

  result.model = unpack(theta);
  result.model.canonicalize();
  result.sse = sse;
  return result;
}

std::vector<double> parametric_features(const GaussianModel& model) {
  GaussianModel canonical = model;
  canonical.canonicalize();
  std::vector<double> out;
  out.reserve(3 * canonical.size());
  for (const auto& t : canonical.terms) {
    out.push_back(t.amplitude);
    out.push_back(t.center);
    out.push_back(t.width);
  }
  return out;
}

}  // namespace vibdiag
