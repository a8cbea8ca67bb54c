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

#include "vibdiag/evalharness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "parallel.hpp"
#include "vibdiag/error.hpp"
#include "vibdiag/stacking.hpp"

namespace vibdiag {
namespace {

std::string fixed6(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string percent(double v) {
  if (!std::isfinite(v)) return "failed";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string round_trip(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string_view class_title(FaultClass c) {
  switch (c) {
    case FaultClass::Normal: return "Normal";
    case FaultClass::Outer: return "Outer fault";
    case FaultClass::Inner: return "Inner fault";
    case FaultClass::Ball: return "Ball fault";
    case FaultClass::Combo: return "Combo fault";
  }
  return "";
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void require_class_sizes(const Dataset& data, std::size_t minimum, const std::string& what) {
  const auto counts = data.class_counts();
  for (int c = 0; c < kNumClasses; ++c) {
    const auto n = counts[static_cast<std::size_t>(c)];
    if (n > 0 && n < minimum) {
      throw Error(Errc::ClassTooSmall, std::string(fault_token(class_from_index(c))) + " has " +
                  std::to_string(n) + " samples; " + what + " needs " + std::to_string(minimum));
    }
  }
}

std::vector<int> term_counts_for(std::span<const FeatureSet> sets) {
  std::set<int> terms;
  for (const auto& s : sets) {
    if (s.kind != FeatureKind::Statistical) terms.insert(s.n_terms);
  }
  return {terms.begin(), terms.end()};
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.emplace_back(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(Errc::MalformedLine, "bad number '" + s + "' at line " + std::to_string(line), line);
  }
  return v;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  h = mix(h ^ a);
  h = mix(h ^ b);
  return mix(h ^ c);
}

std::string FeatureSet::name() const {
  switch (kind) {
    case FeatureKind::Statistical: return "statistical";
    case FeatureKind::Parametric: return "gauss-" + std::to_string(n_terms);
    case FeatureKind::Stacked: return "stacked-" + std::to_string(n_terms);
  }
  return "";
}

std::string FeatureSet::title() const {
  switch (kind) {
    case FeatureKind::Statistical: return "Statistical features";
    case FeatureKind::Parametric:
      return std::to_string(n_terms) + "-term Gauss parametric features";
    case FeatureKind::Stacked: return std::to_string(n_terms) + "-term Gauss stacking features";
  }
  return "";
}

std::size_t FeatureSet::dim() const {
  switch (kind) {
    case FeatureKind::Statistical: return StatFeatures::kDim;
    case FeatureKind::Parametric: return parametric_dimension(n_terms);
    case FeatureKind::Stacked: return stacked_dimension(n_terms);
  }
  return 0;
}

FeatureSet FeatureSet::parse(std::string_view name) {
  if (name == "statistical") return {FeatureKind::Statistical, 0};
  FeatureKind kind;
  std::string_view rest;
  if (name.starts_with("gauss-")) {
    kind = FeatureKind::Parametric;
    rest = name.substr(6);
  } else if (name.starts_with("stacked-")) {
    kind = FeatureKind::Stacked;
    rest = name.substr(8);
  } else {
    throw Error(Errc::InvalidConfig, "unknown feature set '" + std::string(name) + "'");
  }
  int n = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || n < kMinTerms || n > kMaxTerms) {
    throw Error(Errc::InvalidConfig, "feature set term count must be 2..7: " + std::string(name));
  }
  return {kind, n};
}

std::vector<FeatureSet> all_feature_sets() {
  std::vector<FeatureSet> sets{{FeatureKind::Statistical, 0}};
  for (int n = kMaxTerms; n >= kMinTerms; --n) {
    sets.push_back({FeatureKind::Parametric, n});
    sets.push_back({FeatureKind::Stacked, n});
  }
  return sets;
}

FeatureBank FeatureBank::extract(std::span<const RawRecording> recordings,
                                 std::span<const int> term_counts, const ExtractionConfig& cfg) {
  cfg.window.validate();
  struct Task {
    std::size_t recording;
    int channel;
    std::size_t frame;
  };
  std::vector<Task> tasks;
  for (std::size_t r = 0; r < recordings.size(); ++r) {
    recordings[r].validate();
    const std::size_t frames = frame_count(recordings[r].size(), cfg.window);
    if (frames == 0) {
      throw Error(Errc::SignalTooShort, "recording " + std::to_string(r) + " has " +
                  std::to_string(recordings[r].size()) + " samples");
    }
    for (int ch = 1; ch <= 2; ++ch)
      for (std::size_t f = 0; f < frames; ++f) tasks.push_back({r, ch, f});
  }

  FeatureBank bank;
  bank.provenance_.resize(tasks.size());
  bank.stats_.resize(tasks.size());
  std::vector<std::vector<char>> converged(term_counts.size(), std::vector<char>(tasks.size(), 0));
  for (int n : term_counts) {
    FitConfig probe = cfg.fit;
    probe.n_terms = n;
    probe.validate();
    bank.params_[n].resize(tasks.size());
  }

  detail::parallel_for(tasks.size(), cfg.jobs, [&](std::size_t t) {
    const Task& task = tasks[t];
    const RawRecording& rec = recordings[task.recording];
    const auto samples = std::span<const double>(rec.channels[static_cast<std::size_t>(task.channel - 1)])
                             .subspan(task.frame * cfg.window.shift, cfg.window.window_len);
    bank.provenance_[t] = {task.frame, task.channel, rec.label, task.recording};
    if (cfg.stats_on_cepstrum) {
      bank.stats_[t] = statistical_features(cepstral_transform(samples, cfg.taper).values);
    } else {
      bank.stats_[t] = statistical_features(samples);
    }
    for (std::size_t k = 0; k < term_counts.size(); ++k) {
      FitConfig fit = cfg.fit;
      fit.n_terms = term_counts[k];
      const FitResult result = fit_gaussians(samples, fit);
      bank.params_.at(term_counts[k])[t] = parametric_features(result);
      converged[k][t] = result.converged ? 1 : 0;
    }
  });

  for (std::size_t k = 0; k < term_counts.size(); ++k) {
    bank.nonconverged_[term_counts[k]] =
        static_cast<std::size_t>(std::count(converged[k].begin(), converged[k].end(), 0));
  }
  return bank;
}

Dataset FeatureBank::dataset(const FeatureSet& set) const {
  if (set.kind != FeatureKind::Statistical && !params_.contains(set.n_terms)) {
    throw Error(Errc::InvalidConfig, "feature bank lacks " + std::to_string(set.n_terms) + "-term fits");
  }
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(set.dim()));
  out.labels.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    std::vector<double> row;
    switch (set.kind) {
      case FeatureKind::Statistical: {
        const auto a = stats_[i].as_array();
        row.assign(a.begin(), a.end());
        break;
      }
      case FeatureKind::Parametric:
        row = params_.at(set.n_terms)[i];
        break;
      case FeatureKind::Stacked:
        row = stack_features(stats_[i], provenance_[i].frame_index, params_.at(set.n_terms)[i],
                             provenance_[i].frame_index)
                  .values;
        break;
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
    out.labels.push_back(provenance_[i].label);
  }
  return out;
}

std::size_t FeatureBank::nonconverged(int n_terms) const {
  auto it = nonconverged_.find(n_terms);
  return it == nonconverged_.end() ? 0 : it->second;
}

FeatureTable build_feature_dataset(const RawRecording& recording, const FeatureSet& set,
                                   const ExtractionConfig& cfg) {
  std::vector<int> terms;
  if (set.kind != FeatureKind::Statistical) terms.push_back(set.n_terms);
  const FeatureBank bank = FeatureBank::extract(std::span(&recording, 1), terms, cfg);
  FeatureTable table;
  table.set = set;
  table.data = bank.dataset(set);
  table.provenance = bank.provenance();
  table.nonconverged_fits = terms.empty() ? 0 : bank.nonconverged(set.n_terms);
  return table;
}

std::string format_feature_csv(const FeatureTable& table) {
  std::string out = "frame_index,channel,label";
  for (std::size_t j = 0; j < table.data.dim(); ++j) out += ",f" + std::to_string(j);
  out += '\n';
  for (std::size_t i = 0; i < table.data.size(); ++i) {
    const auto& p = table.provenance[i];
    out += std::to_string(p.frame_index) + ',' + std::to_string(p.channel) + ',' +
           std::string(fault_token(table.data.labels[i]));
    for (double v : table.data.row(i)) out += ',' + round_trip(v);
    out += '\n';
  }
  return out;
}

FeatureTable parse_feature_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::EmptyFile, "feature CSV has no header");
  const auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "frame_index" || header[1] != "channel" ||
      header[2] != "label") {
    throw Error(Errc::MalformedLine, "feature CSV header", 1);
  }
  const std::size_t dim = header.size() - 3;
  std::vector<std::vector<double>> rows;
  std::vector<FaultClass> labels;
  FeatureTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::MalformedLine, "field count at line " + std::to_string(line_no), line_no);
    }
    FrameProvenance p;
    p.frame_index = static_cast<std::size_t>(parse_double(fields[0], line_no));
    p.channel = static_cast<int>(parse_double(fields[1], line_no));
    auto label = parse_fault_token(fields[2]);
    if (!label) {
      throw Error(Errc::MalformedLine, "unknown label at line " + std::to_string(line_no), line_no);
    }
    p.label = *label;
    std::vector<double> row(dim);
    for (std::size_t j = 0; j < dim; ++j) row[j] = parse_double(fields[3 + j], line_no);
    rows.push_back(std::move(row));
    labels.push_back(*label);
    table.provenance.push_back(p);
  }
  if (rows.empty()) throw Error(Errc::EmptyFile, "feature CSV has no rows");
  table.data = Dataset::from_rows(rows, std::move(labels));
  if (dim == StatFeatures::kDim) {
    table.set = {FeatureKind::Statistical, 0};
  } else if (dim % 3 == 0) {
    table.set = {FeatureKind::Parametric, static_cast<int>(dim / 3)};
  } else {
    table.set = {FeatureKind::Stacked, static_cast<int>((dim - StatFeatures::kDim) / 3)};
  }
  return table;
}

SplitIndices stratified_split(const Dataset& data, SplitRatio ratio, std::uint64_t seed) {
  data.validate();
  if (ratio.train < 1 || ratio.test < 1) throw Error(Errc::InvalidConfig, "split parts must be >= 1");
  const auto parts = static_cast<std::size_t>(ratio.train + ratio.test);
  require_class_sizes(data, parts, "the split");
  SplitIndices out;
  for (int c = 0; c < kNumClasses; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (class_index(data.labels[i]) == c) members.push_back(i);
    }
    if (members.empty()) continue;
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t n_train = members.size() * static_cast<std::size_t>(ratio.train) / parts;
    out.train.insert(out.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.insert(out.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<int> stratified_folds(const Dataset& data, int k, std::uint64_t seed) {
  data.validate();
  if (k < 2) throw Error(Errc::InvalidConfig, "need k >= 2 folds");
  require_class_sizes(data, static_cast<std::size_t>(k), "cross-validation");
  std::vector<int> fold(data.size(), 0);
  std::size_t position = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (class_index(data.labels[i]) == c) members.push_back(i);
    }
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i : members) fold[i] = static_cast<int>(position++ % static_cast<std::size_t>(k));
  }
  return fold;
}

double accuracy(const ConfusionMatrix& confusion) {
  std::size_t hit = 0;
  std::size_t total = 0;
  for (std::size_t t = 0; t < confusion.size(); ++t) {
    for (std::size_t p = 0; p < confusion[t].size(); ++p) {
      total += confusion[t][p];
      if (t == p) hit += confusion[t][p];
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

FoldOutcome evaluate_split(const Dataset& train, const Dataset& test, ClassifierKind kind,
                           const ClassifierSettings& settings, std::uint64_t seed) {
  test.validate();
  FoldOutcome out{train_classifier(kind, train, settings, seed), {}, 0.0};
  for (std::size_t i = 0; i < test.size(); ++i) {
    const FaultClass predicted = out.classifier.predict(test.row(i));
    ++out.confusion[static_cast<std::size_t>(class_index(test.labels[i]))]
                   [static_cast<std::size_t>(class_index(predicted))];
  }
  out.accuracy = accuracy(out.confusion);
  return out;
}

CrossValidation cross_validate(const Dataset& data, int k, ClassifierKind kind,
                               const ClassifierSettings& settings, std::uint64_t seed) {
  const auto fold = stratified_folds(data, k, seed);
  CrossValidation cv;
  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < data.size(); ++i) (fold[i] == f ? test : train).push_back(i);
    const FoldOutcome outcome =
        evaluate_split(data.subset(train), data.subset(test), kind, settings,
                       derive_seed(seed, 0xC0FFEE, static_cast<std::uint64_t>(f)));
    cv.fold_accuracy.push_back(outcome.accuracy);
    for (std::size_t t = 0; t < cv.confusion.size(); ++t)
      for (std::size_t p = 0; p < cv.confusion[t].size(); ++p)
        cv.confusion[t][p] += outcome.confusion[t][p];
  }
  return cv;
}

void ExperimentSpec::validate() const {
  if (feature_sets.empty() || classifiers.empty()) {
    throw Error(Errc::InvalidConfig, "feature sets and classifiers must be non-empty");
  }
  if (split.train < 1 || split.test < 1) throw Error(Errc::InvalidConfig, "split parts must be >= 1");
  if (folds < 2) throw Error(Errc::InvalidConfig, "folds must be >= 2");
  if (jobs < 1) throw Error(Errc::InvalidConfig, "jobs must be >= 1");
  if (recordings.empty()) {
    if (synthesis.speeds_hz.empty() || synthesis.sampling_rates_hz.empty() ||
        synthesis.classes.size() < 2) {
      throw Error(Errc::InvalidConfig, "synthesis grid needs speeds, rates and >= 2 classes");
    }
  }
  extraction.window.validate();
}

std::string Condition::name() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%gHz_Fs%g", speed_hz, fs_hz);
  return buf;
}

const CellResult* ExperimentReport::find(std::size_t condition, const FeatureSet& set,
                                         ClassifierKind classifier) const {
  for (const auto& c : cells) {
    if (c.condition == condition && c.feature_set == set && c.classifier == classifier) return &c;
  }
  return nullptr;
}

ExperimentReport run_grid(const ExperimentSpec& spec) {
  spec.validate();
  auto log = [&](const std::string& msg) {
    if (spec.progress) spec.progress(msg);
  };

  // Recordings grouped by condition, conditions ordered by (speed, fs).
  std::map<std::pair<double, double>, std::vector<RawRecording>> groups;
  if (!spec.recordings.empty()) {
    for (const auto& path : spec.recordings) {
      RawRecording rec = load_signal_file(path);
      groups[{rec.rotating_speed_hz, rec.sampling_rate_hz}].push_back(std::move(rec));
    }
  } else {
    for (double speed : spec.synthesis.speeds_hz)
      for (double fs : spec.synthesis.sampling_rates_hz) groups[{speed, fs}];
  }

  ExperimentReport report;
  report.seed = spec.seed;
  report.folds = spec.folds;
  report.feature_sets = spec.feature_sets;
  report.classifiers = spec.classifiers;
  const auto terms = term_counts_for(spec.feature_sets);

  std::size_t cond_index = 0;
  for (auto& [key, recordings] : groups) {
    const Condition condition{key.first, key.second};
    if (spec.recordings.empty()) {
      for (FaultClass c : spec.synthesis.classes) {
        SynthesisConfig cfg = spec.synthesis.base;
        cfg.fault = c;
        cfg.speed_hz = condition.speed_hz;
        cfg.fs_hz = condition.fs_hz;
        cfg.duration_s = spec.synthesis.duration_s;
        cfg.seed = derive_seed(spec.seed, 0x5EED, cond_index, static_cast<std::uint64_t>(class_index(c)));
        cfg.noise_std = spec.synthesis.snr_db ? noise_std_for_snr(cfg, *spec.synthesis.snr_db)
                                              : spec.synthesis.noise_std;
        recordings.push_back(synthesize_recording(cfg));
      }
    }
    log("condition " + condition.name() + ": extracting features from " +
        std::to_string(recordings.size()) + " recordings");
    ExtractionConfig extraction = spec.extraction;
    extraction.jobs = spec.jobs;
    const FeatureBank bank = FeatureBank::extract(recordings, terms, extraction);

    ConditionSummary summary{condition, {}, recordings.size()};
    for (const auto& p : bank.provenance()) ++summary.samples[static_cast<std::size_t>(class_index(p.label))];
    report.conditions.push_back(summary);
    recordings.clear();
    recordings.shrink_to_fit();

    std::vector<Dataset> datasets;
    for (const auto& set : spec.feature_sets) datasets.push_back(bank.dataset(set));

    const std::uint64_t fold_seed = derive_seed(spec.seed, 0xF01D, cond_index);
    const std::uint64_t split_seed = derive_seed(spec.seed, 0x5B17, cond_index);
    const std::size_t n_cls = spec.classifiers.size();
    std::vector<CellResult> cells(spec.feature_sets.size() * n_cls);
    detail::parallel_for(cells.size(), spec.jobs, [&](std::size_t t) {
      const std::size_t fs_index = t / n_cls;
      CellResult& cell = cells[t];
      cell.condition = cond_index;
      cell.feature_set = spec.feature_sets[fs_index];
      cell.classifier = spec.classifiers[t % n_cls];
      cell.nonconverged_fits = cell.feature_set.kind == FeatureKind::Statistical
                                   ? 0
                                   : bank.nonconverged(cell.feature_set.n_terms);
      const auto start = std::chrono::steady_clock::now();
      const std::uint64_t model_seed =
          derive_seed(spec.seed, cond_index, fs_index, static_cast<std::uint64_t>(cell.classifier));
      try {
        const Dataset& data = datasets[fs_index];
        // Shared fold assignment so cells of a condition are paired.
        const auto fold = stratified_folds(data, spec.folds, fold_seed);
        for (int f = 0; f < spec.folds; ++f) {
          std::vector<std::size_t> train;
          std::vector<std::size_t> test;
          for (std::size_t i = 0; i < data.size(); ++i) (fold[i] == f ? test : train).push_back(i);
          const FoldOutcome outcome =
              evaluate_split(data.subset(train), data.subset(test), cell.classifier, spec.settings,
                             derive_seed(model_seed, static_cast<std::uint64_t>(f)));
          cell.fold_accuracy.push_back(outcome.accuracy);
          for (std::size_t a = 0; a < cell.confusion.size(); ++a)
            for (std::size_t b = 0; b < cell.confusion[a].size(); ++b)
              cell.confusion[a][b] += outcome.confusion[a][b];
        }
        cell.mean_accuracy = std::accumulate(cell.fold_accuracy.begin(), cell.fold_accuracy.end(), 0.0) /
                             static_cast<double>(cell.fold_accuracy.size());
        cell.std_accuracy = sample_std(cell.fold_accuracy);
        if (spec.holdout) {
          const SplitIndices split = stratified_split(data, spec.split, split_seed);
          cell.holdout_accuracy =
              evaluate_split(data.subset(split.train), data.subset(split.test), cell.classifier,
                             spec.settings, derive_seed(model_seed, 0x401D))
                  .accuracy;
        }
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
        cell.fold_accuracy.clear();
        cell.mean_accuracy = std::nan("");
        cell.std_accuracy = std::nan("");
        cell.holdout_accuracy.reset();
      }
      cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    for (std::size_t fs_index = 0; fs_index < spec.feature_sets.size(); ++fs_index) {
      CellResult* best = nullptr;
      for (std::size_t k = 0; k < n_cls; ++k) {
        CellResult& c = cells[fs_index * n_cls + k];
        if (!c.failed && (best == nullptr || c.mean_accuracy > best->mean_accuracy)) best = &c;
      }
      if (best != nullptr) best->best_in_row = true;
    }
    log("condition " + condition.name() + ": " + std::to_string(cells.size()) + " cells done");
    report.cells.insert(report.cells.end(), cells.begin(), cells.end());

    for (std::size_t nodes : spec.scn_node_sweep) {
      for (std::size_t fs_index = 0; fs_index < spec.feature_sets.size(); ++fs_index) {
        ClassifierSettings settings = spec.settings;
        settings.scn.max_nodes = nodes;
        SweepResult sweep{cond_index, spec.feature_sets[fs_index], nodes, std::nan("")};
        try {
          const auto cv = cross_validate(datasets[fs_index], spec.folds, ClassifierKind::Scn, settings,
                                         derive_seed(fold_seed, 0x5C4, nodes));
          sweep.mean_accuracy = std::accumulate(cv.fold_accuracy.begin(), cv.fold_accuracy.end(), 0.0) /
                                static_cast<double>(cv.fold_accuracy.size());
        } catch (const std::exception&) {
        }
        report.sweep.push_back(sweep);
      }
    }
    ++cond_index;
  }
  return report;
}

std::string report_csv(const ExperimentReport& report, bool include_timing) {
  std::string out = "condition,feature_set,classifier";
  for (int f = 1; f <= report.folds; ++f) out += ",fold_" + std::to_string(f);
  out += ",mean,std,holdout,nonconverged_fits,best,status,seconds\n";
  for (const auto& c : report.cells) {
    out += report.conditions[c.condition].condition.name() + ',' + c.feature_set.name() + ',' +
           std::string(classifier_name(c.classifier));
    for (int f = 0; f < report.folds; ++f) {
      out += ',';
      if (static_cast<std::size_t>(f) < c.fold_accuracy.size()) out += fixed6(c.fold_accuracy[static_cast<std::size_t>(f)]);
      else out += "NA";
    }
    out += ',' + fixed6(c.mean_accuracy) + ',' + fixed6(c.std_accuracy) + ',' +
           (c.holdout_accuracy ? fixed6(*c.holdout_accuracy) : std::string("NA")) + ',' +
           std::to_string(c.nonconverged_fits) + ',' + (c.best_in_row ? "1" : "0") + ',' +
           (c.failed ? "failed" : "ok") + ',' + (include_timing ? fixed6(c.seconds) : std::string("NA")) +
           '\n';
  }
  return out;
}

std::string report_table(const ExperimentReport& report) {
  std::ostringstream os;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };

  for (std::size_t ci = 0; ci < report.conditions.size(); ++ci) {
    const auto& summary = report.conditions[ci];
    os << "Condition " << summary.condition.name() << "\n\n";
    os << "Samples per class (frames x 2 channels)\n";
    for (FaultClass c : {FaultClass::Outer, FaultClass::Inner, FaultClass::Combo, FaultClass::Ball,
                         FaultClass::Normal}) {
      os << "  " << pad(std::string(class_title(c)), 14)
         << summary.samples[static_cast<std::size_t>(class_index(c))] << '\n';
    }
    os << '\n';

    auto grid = [&](const std::string& heading, auto value_of) {
      os << heading << '\n';
      std::size_t label_w = 8;
      for (const auto& fs : report.feature_sets) label_w = std::max(label_w, fs.title().size());
      label_w += 2;
      os << pad("Features", label_w);
      for (auto k : report.classifiers) os << pad(std::string(classifier_title(k)), 20);
      os << '\n';
      for (const auto& fs : report.feature_sets) {
        os << pad(fs.title(), label_w);
        for (auto k : report.classifiers) {
          const CellResult* cell = report.find(ci, fs, k);
          std::string v = cell == nullptr ? "-" : value_of(*cell);
          os << pad(v, 20);
        }
        os << '\n';
      }
      os << '\n';
    };
    grid(std::to_string(report.folds) + "-fold cross-validated mean test accuracy (* best in row)",
         [](const CellResult& c) { return percent(c.mean_accuracy) + (c.best_in_row ? " *" : ""); });
    if (std::any_of(report.cells.begin(), report.cells.end(),
                    [](const CellResult& c) { return c.holdout_accuracy.has_value(); })) {
      grid("Single stratified split test accuracy", [](const CellResult& c) {
        return c.holdout_accuracy ? percent(*c.holdout_accuracy) : std::string("-");
      });
    }
  }

  // Per-classifier condition x feature grid when several conditions ran.
  if (report.conditions.size() > 1) {
    std::vector<FeatureSet> columns;
    for (const auto& fs : report.feature_sets) {
      if (fs.kind != FeatureKind::Stacked) columns.push_back(fs);
    }
    for (auto k : report.classifiers) {
      os << "Testing accuracy by working condition (" << classifier_title(k) << ")\n";
      os << pad("Condition", 16);
      for (const auto& fs : columns) {
        os << pad(fs.kind == FeatureKind::Statistical ? "Statistical"
                                                      : std::to_string(fs.n_terms) + "-term Gauss",
                  14);
      }
      os << '\n';
      for (std::size_t ci = 0; ci < report.conditions.size(); ++ci) {
        os << pad(report.conditions[ci].condition.name(), 16);
        for (const auto& fs : columns) {
          const CellResult* cell = report.find(ci, fs, k);
          os << pad(cell == nullptr ? "-" : percent(cell->mean_accuracy), 14);
        }
        os << '\n';
      }
      os << '\n';
    }
  }

  if (!report.sweep.empty()) {
    os << "SCN hidden-node sweep (mean CV accuracy)\n";
    for (const auto& s : report.sweep) {
      os << "  " << pad(report.conditions[s.condition].condition.name(), 16)
         << pad(s.feature_set.name(), 14) << pad(std::to_string(s.nodes), 6)
         << percent(s.mean_accuracy) << '\n';
    }
  }
  return os.str();
}

std::string report_json(const ExperimentReport& report, bool include_timing) {
  using nlohmann::json;
  json j;
  j["schema"] = "vibdiag.report/1";
  j["seed"] = report.seed;
  j["folds"] = report.folds;
  json conditions = json::array();
  for (const auto& c : report.conditions) {
    json samples = json::object();
    for (FaultClass fc : kAllClasses) {
      samples[std::string(fault_token(fc))] = c.samples[static_cast<std::size_t>(class_index(fc))];
    }
    conditions.push_back({{"name", c.condition.name()},
                          {"speed_hz", c.condition.speed_hz},
                          {"fs_hz", c.condition.fs_hz},
                          {"recordings", c.recordings},
                          {"samples", samples}});
  }
  j["conditions"] = conditions;
  json cells = json::array();
  for (const auto& c : report.cells) {
    json cell = {{"condition", report.conditions[c.condition].condition.name()},
                 {"feature_set", c.feature_set.name()},
                 {"classifier", classifier_name(c.classifier)},
                 {"fold_accuracy", c.fold_accuracy},
                 {"nonconverged_fits", c.nonconverged_fits},
                 {"best", c.best_in_row},
                 {"confusion", c.confusion}};
    if (c.failed) {
      cell["error"] = c.error;
    } else {
      cell["mean"] = c.mean_accuracy;
      cell["std"] = c.std_accuracy;
    }
    if (c.holdout_accuracy) cell["holdout"] = *c.holdout_accuracy;
    if (include_timing) cell["seconds"] = c.seconds;
    cells.push_back(std::move(cell));
  }
  j["cells"] = cells;
  json sweep = json::array();
  for (const auto& s : report.sweep) {
    sweep.push_back({{"condition", report.conditions[s.condition].condition.name()},
                     {"feature_set", s.feature_set.name()},
                     {"nodes", s.nodes},
                     {"mean", std::isfinite(s.mean_accuracy) ? json(s.mean_accuracy) : json(nullptr)}});
  }
  j["sweep"] = sweep;
  return j.dump(1) + "\n";
}

}  // namespace vibdiag
