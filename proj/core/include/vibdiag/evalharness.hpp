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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vibdiag/classifiers/classifier.hpp"
#include "vibdiag/dataio.hpp"
#include "vibdiag/dataset.hpp"
#include "vibdiag/framing.hpp"
#include "vibdiag/gaussfit.hpp"
#include "vibdiag/statfeat.hpp"

namespace vibdiag {

enum class FeatureKind { Statistical, Parametric, Stacked };

struct FeatureSet {
  FeatureKind kind = FeatureKind::Statistical;
  int n_terms = 0;  // 0 for Statistical

  std::string name() const;   // "statistical", "gauss-<n>", "stacked-<n>"
  std::string title() const;  // report row label
  std::size_t dim() const;
  static FeatureSet parse(std::string_view name);

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

// The thirteen sets in report row order: statistical, then for n = 7..2 the
// parametric and stacked variants.
std::vector<FeatureSet> all_feature_sets();

struct ExtractionConfig {
  WindowConfig window;
  FitConfig fit;                  // n_terms is set per feature set
  bool stats_on_cepstrum = true;  // false: statistics of the raw frame
  Taper taper = Taper::Hamming;   // taper before the cepstral transform
  int jobs = 1;
};

struct FrameProvenance {
  std::size_t frame_index = 0;  // position within its channel
  int channel = 1;              // 1 or 2
  FaultClass label = FaultClass::Normal;
  std::size_t recording = 0;
};

// Every per-frame feature block for a group of recordings, extracted once
// and sliced into datasets per feature set.
class FeatureBank {
 public:
  static FeatureBank extract(std::span<const RawRecording> recordings,
                             std::span<const int> term_counts, const ExtractionConfig& cfg);

  std::size_t size() const noexcept { return provenance_.size(); }
  const std::vector<FrameProvenance>& provenance() const noexcept { return provenance_; }
  Dataset dataset(const FeatureSet& set) const;
  std::size_t nonconverged(int n_terms) const;

 private:
  std::vector<FrameProvenance> provenance_;
  std::vector<StatFeatures> stats_;
  std::map<int, std::vector<std::vector<double>>> params_;
  std::map<int, std::size_t> nonconverged_;
};

struct FeatureTable {
  FeatureSet set;
  Dataset data;
  std::vector<FrameProvenance> provenance;
  std::size_t nonconverged_fits = 0;
};

// One row per frame per channel.
FeatureTable build_feature_dataset(const RawRecording& recording, const FeatureSet& set,
                                   const ExtractionConfig& cfg);

// Header `frame_index,channel,label,f0..f{d-1}`; labels as fault tokens.
std::string format_feature_csv(const FeatureTable& table);
FeatureTable parse_feature_csv(std::string_view text);

// Train:test proportion per class, e.g. 4:1.
struct SplitRatio {
  int train = 4;
  int test = 1;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per class floor(n * train / (train + test)) rows go to training. Every
// present class needs at least train + test rows (ClassTooSmall).
SplitIndices stratified_split(const Dataset& data, SplitRatio ratio, std::uint64_t seed);

// Fold id in [0, k) for every row; classes are spread evenly over folds.
std::vector<int> stratified_folds(const Dataset& data, int k, std::uint64_t seed);

// confusion[true][predicted]
using ConfusionMatrix = std::array<std::array<std::size_t, kNumClasses>, kNumClasses>;

double accuracy(const ConfusionMatrix& confusion);

struct FoldOutcome {
  TrainedClassifier classifier;
  ConfusionMatrix confusion{};
  double accuracy = 0.0;
};

// Trains on `train` alone (including standardization) and scores `test`.
FoldOutcome evaluate_split(const Dataset& train, const Dataset& test, ClassifierKind kind,
                           const ClassifierSettings& settings, std::uint64_t seed);

struct CrossValidation {
  std::vector<double> fold_accuracy;
  ConfusionMatrix confusion{};  // summed over folds
};

CrossValidation cross_validate(const Dataset& data, int k, ClassifierKind kind,
                               const ClassifierSettings& settings, std::uint64_t seed);

struct SynthesisGrid {
  std::vector<double> speeds_hz = {20.0};
  std::vector<double> sampling_rates_hz = {20480.0};
  std::vector<FaultClass> classes = {kAllClasses.begin(), kAllClasses.end()};
  double duration_s = 10.0;
  // Either a fixed noise level or a target SNR (per recording, channel 1).
  double noise_std = 0.0;
  std::optional<double> snr_db;
  SynthesisConfig base;  // signature parameters; fault/speed/fs/duration/seed are overwritten
};

struct ExperimentSpec {
  std::vector<std::filesystem::path> recordings;  // when empty, `synthesis` is used
  SynthesisGrid synthesis;
  std::vector<FeatureSet> feature_sets = all_feature_sets();
  std::vector<ClassifierKind> classifiers = {kAllClassifiers.begin(), kAllClassifiers.end()};
  SplitRatio split;
  int folds = 5;
  bool holdout = true;  // also score a single stratified split
  std::uint64_t seed = 0;
  ExtractionConfig extraction;
  ClassifierSettings settings;
  std::vector<std::size_t> scn_node_sweep;  // extra SCN runs per hidden-node count
  int jobs = 1;
  std::function<void(const std::string&)> progress;  // optional status lines

  void validate() const;
};

struct Condition {
  double speed_hz = 0.0;
  double fs_hz = 0.0;

  std::string name() const;  // "20Hz_Fs20480"
};

struct ConditionSummary {
  Condition condition;
  ClassCounts samples{};  // rows per class across both channels
  std::size_t recordings = 0;
};

struct CellResult {
  std::size_t condition = 0;
  FeatureSet feature_set;
  ClassifierKind classifier = ClassifierKind::Tree;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  std::optional<double> holdout_accuracy;
  ConfusionMatrix confusion{};
  std::size_t nonconverged_fits = 0;
  double seconds = 0.0;
  bool failed = false;
  std::string error;
  bool best_in_row = false;
};

struct SweepResult {
  std::size_t condition = 0;
  FeatureSet feature_set;
  std::size_t nodes = 0;
  double mean_accuracy = 0.0;
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  int folds = 5;
  std::vector<ConditionSummary> conditions;
  std::vector<FeatureSet> feature_sets;
  std::vector<ClassifierKind> classifiers;
  // Ordered by (condition, feature set, classifier) in spec order.
  std::vector<CellResult> cells;
  std::vector<SweepResult> sweep;

  const CellResult* find(std::size_t condition, const FeatureSet& set,
                         ClassifierKind classifier) const;
};

ExperimentReport run_grid(const ExperimentSpec& spec);

// Wall-clock seconds vary run to run, so they are only written on request.
std::string report_csv(const ExperimentReport& report, bool include_timing = false);
std::string report_table(const ExperimentReport& report);
std::string report_json(const ExperimentReport& report, bool include_timing = false);

// SplitMix64-style mixing for independent, order-free sub-seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) noexcept;

}  // namespace vibdiag
