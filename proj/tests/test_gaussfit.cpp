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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "vibdiag/error.hpp"
#include "vibdiag/gaussfit.hpp"

using namespace vibdiag;

namespace {

// Random model with centers at least 0.25 apart and away from the edges.
GaussianModel random_model(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> jitter(-0.04, 0.04);
  std::uniform_real_distribution<double> width(0.03, 0.07);
  std::uniform_real_distribution<double> amp(0.5, 2.0);
  std::bernoulli_distribution flip(0.3);
  GaussianModel m;
  for (int i = 0; i < n; ++i) {
    const double center = (static_cast<double>(i) + 0.5) / static_cast<double>(n) + jitter(rng);
    m.terms.push_back({flip(rng) ? -amp(rng) : amp(rng), center, width(rng)});
  }
  m.canonicalize();
  return m;
}

std::vector<double> sample_model(const GaussianModel& m, std::size_t len) {
  std::vector<double> y;
  for (double x : fit_abscissa(len)) y.push_back(eval_gauss(m, x));
  return y;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_SUITE("gaussfit") {

TEST_CASE("model evaluation") {
  GaussianModel m;
  m.terms = {{2.0, 0.5, 0.1}};
  CHECK(eval_gauss(m, 0.5) == doctest::Approx(2.0));
  CHECK(eval_gauss(m, 0.6) == doctest::Approx(2.0 * std::exp(-1.0)));
  m.terms.push_back({-1.0, 0.6, 0.2});
  CHECK(eval_gauss(m, 0.6) == doctest::Approx(2.0 * std::exp(-1.0) - 1.0));
}

TEST_CASE("analytic jacobian matches central differences") {
  std::mt19937_64 rng(31);
  const auto xs = fit_abscissa(60);
  for (int n = 2; n <= 7; ++n) {
    const GaussianModel m = random_model(rng, n);
    const Eigen::MatrixXd jac = gauss_jacobian(m, xs);
    REQUIRE(jac.rows() == 60);
    REQUIRE(jac.cols() == 3 * n);
    // Errors are relative to the largest entry of each column; entries deep in
    // a term's tail are pure round-off on both sides.
    double worst = 0.0;
    for (int j = 0; j < 3 * n; ++j) {
      GaussianModel up = m, down = m;
      auto& tu = up.terms[static_cast<std::size_t>(j / 3)];
      auto& td = down.terms[static_cast<std::size_t>(j / 3)];
      double* pu = j % 3 == 0 ? &tu.amplitude : j % 3 == 1 ? &tu.center : &tu.width;
      double* pd = j % 3 == 0 ? &td.amplitude : j % 3 == 1 ? &td.center : &td.width;
      const double h = 1e-6;
      *pu += h;
      *pd -= h;
      double err = 0.0;
      for (std::size_t r = 0; r < xs.size(); ++r) {
        const double fd = (eval_gauss(up, xs[r]) - eval_gauss(down, xs[r])) / (2.0 * h);
        err = std::max(err, std::abs(fd - jac(static_cast<Eigen::Index>(r), j)));
      }
      worst = std::max(worst, err / jac.col(j).lpNorm<Eigen::Infinity>());
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("noiseless two and three term frames are recovered") {
  std::mt19937_64 rng(32);
  int recovered = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = trial % 2 == 0 ? 2 : 3;
    const GaussianModel truth = random_model(rng, n);
    FitConfig cfg;
    cfg.n_terms = n;
    const FitResult fit = fit_gaussians(sample_model(truth, 250), cfg);
    REQUIRE(fit.model.size() == static_cast<std::size_t>(n));
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      ok = ok && rel(fit.model.terms[i].amplitude, truth.terms[i].amplitude) < 1e-4 &&
           rel(fit.model.terms[i].center, truth.terms[i].center) < 1e-4 &&
           rel(fit.model.terms[i].width, truth.terms[i].width) < 1e-4;
    }
    if (ok) ++recovered;
    for (std::size_t k = 1; k < fit.sse_trace.size(); ++k) {
      CHECK(fit.sse_trace[k] <= fit.sse_trace[k - 1]);
    }
    CHECK(fit.sse <= fit.initial_sse);
  }
  CHECK(recovered == 50);
}

TEST_CASE("sse traces never increase on noisy data") {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> noise(0.0, 0.3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> y(250);
    for (double& v : y) v = noise(rng);
    FitConfig cfg;
    cfg.n_terms = 2 + trial % 6;
    const FitResult fit = fit_gaussians(y, cfg);
    CHECK(fit.sse_trace.front() == fit.initial_sse);
    CHECK(fit.sse_trace.back() == fit.sse);
    for (std::size_t k = 1; k < fit.sse_trace.size(); ++k) {
      CHECK(fit.sse_trace[k] <= fit.sse_trace[k - 1]);
    }
    for (const auto& t : fit.model.terms) {
      CHECK(t.width > 0.0);
      CHECK(t.center >= 0.0);
      CHECK(t.center <= 1.0);
      CHECK(std::isfinite(t.amplitude));
    }
    CHECK(fit.model.is_canonical());
  }
}

TEST_CASE("zero target") {
  FitConfig cfg;
  cfg.n_terms = 3;
  const FitResult fit = fit_gaussians(std::vector<double>(100, 0.0), cfg);
  CHECK(fit.sse < 1e-20);
  for (const auto& t : fit.model.terms) CHECK(std::abs(t.amplitude) < 1e-10);
}

TEST_CASE("init finds a single bump apex") {
  GaussianModel bump;
  bump.terms = {{1.5, 0.37, 0.05}};
  const auto y = sample_model(bump, 250);
  const auto apex = static_cast<double>(std::max_element(y.begin(), y.end()) - y.begin());
  const GaussianModel init = init_params(y, 1);
  REQUIRE(init.size() == 1);
  CHECK(std::abs(init.terms[0].center * 249.0 - apex) <= 2.0);
}

TEST_CASE("init falls back to the uniform grid") {
  const GaussianModel init = init_params(std::vector<double>(90, 1.0), 3);
  REQUIRE(init.size() == 3);
  CHECK(init.terms[0].center == doctest::Approx(1.0 / 6.0));
  CHECK(init.terms[1].center == doctest::Approx(3.0 / 6.0));
  CHECK(init.terms[2].center == doctest::Approx(5.0 / 6.0));
  for (const auto& t : init.terms) CHECK(t.width > 0.0);
}

TEST_CASE("canonical order and feature layout") {
  GaussianModel m;
  m.terms = {{1.0, 0.8, 0.1}, {2.0, 0.2, 0.3}, {3.0, 0.2, 0.1}, {0.5, 0.2, 0.1}};
  CHECK_FALSE(m.is_canonical());
  const auto f = parametric_features(m);
  REQUIRE(f.size() == 12);
  CHECK(f == std::vector<double>{0.5, 0.2, 0.1, 3.0, 0.2, 0.1, 2.0, 0.2, 0.3, 1.0, 0.8, 0.1});
  m.canonicalize();
  CHECK(m.is_canonical());
}

TEST_CASE("fit features have 3n entries") {
  std::mt19937_64 rng(34);
  std::normal_distribution<double> noise;
  std::vector<double> y(250);
  for (double& v : y) v = noise(rng);
  for (int n = kMinTerms; n <= kMaxTerms; ++n) {
    FitConfig cfg;
    cfg.n_terms = n;
    cfg.max_iter = 20;
    CHECK(parametric_features(fit_gaussians(y, cfg)).size() == static_cast<std::size_t>(3 * n));
  }
}

TEST_CASE("fit targets") {
  const std::vector<double> y = {-1, 2, -3, 4, -5, 6};
  FitConfig cfg;
  cfg.target = FitTarget::Abs;
  CHECK(fit_target_values(y, cfg) == std::vector<double>{1, 2, 3, 4, 5, 6});
  cfg.target = FitTarget::Envelope;
  const auto env = fit_target_values(y, cfg);
  CHECK(env[0] == doctest::Approx(1.5));
  CHECK(env[2] == doctest::Approx(3.0));
  cfg.target = FitTarget::Raw;
  CHECK(fit_target_values(y, cfg) == y);
}

TEST_CASE("configuration errors") {
  FitConfig cfg;
  cfg.n_terms = 8;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.n_terms = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.n_terms = 7;
  try {
    fit_gaussians(std::vector<double>(20, 1.0), cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::FrameTooShortForTerms);
  }
  GaussianModel bad;
  bad.terms = {{1.0, 0.5, -0.1}};
  CHECK_THROWS_AS(bad.validate(), Error);
}

}  // TEST_SUITE
