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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "vibdiag/classifiers/classifier.hpp"
#include "vibdiag/dataio.hpp"
#include "vibdiag/framing.hpp"
#include "vibdiag/gaussfit.hpp"
#include "vibdiag/statfeat.hpp"

using namespace vibdiag;

namespace {

std::vector<double> noise_frame(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

Dataset blobs(std::size_t per_class, std::size_t dim) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> rows;
  std::vector<FaultClass> labels;
  for (int c = 0; c < kNumClasses; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> r(dim);
      for (std::size_t d = 0; d < dim; ++d) r[d] = (d == static_cast<std::size_t>(c) ? 2.0 : 0.0) + g(rng);
      rows.push_back(r);
      labels.push_back(class_from_index(c));
    }
  }
  return Dataset::from_rows(rows, labels);
}

void BM_Cepstrum(benchmark::State& state) {
  const auto frame = noise_frame(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(cepstral_transform(frame));
}
BENCHMARK(BM_Cepstrum)->Arg(250)->Arg(1024);

void BM_Statistics(benchmark::State& state) {
  const auto frame = noise_frame(250, 2);
  for (auto _ : state) benchmark::DoNotOptimize(statistical_features(frame));
}
BENCHMARK(BM_Statistics);

void BM_GaussFit(benchmark::State& state) {
  const auto frame = noise_frame(250, 4);
  FitConfig cfg;
  cfg.n_terms = static_cast<int>(state.range(0));
  cfg.target = FitTarget::Envelope;
  for (auto _ : state) benchmark::DoNotOptimize(fit_gaussians(frame, cfg));
}
BENCHMARK(BM_GaussFit)->DenseRange(2, 7);

void BM_Synthesize(benchmark::State& state) {
  SynthesisConfig cfg;
  cfg.fault = FaultClass::Combo;
  cfg.duration_s = 1.0;
  cfg.noise_std = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_recording(cfg));
}
BENCHMARK(BM_Synthesize);

void BM_Train(benchmark::State& state) {
  const Dataset data = blobs(100, 16);
  const auto kind = static_cast<ClassifierKind>(state.range(0));
  ClassifierSettings settings;
  settings.bp.iterations = 20000;
  for (auto _ : state) benchmark::DoNotOptimize(train_classifier(kind, data, settings, 1));
  state.SetLabel(std::string(classifier_name(kind)));
}
BENCHMARK(BM_Train)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
