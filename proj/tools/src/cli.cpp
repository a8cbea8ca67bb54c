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

#include "vibdiag_cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vibdiag/error.hpp"

namespace vibdiag::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::Io, "cannot write " + path);
  file << text;
  if (!file) throw Error(Errc::Io, "write failed for " + path);
}

std::uint64_t env_seed() {
  const char* text = std::getenv(kSeedEnv);
  if (text == nullptr || *text == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw UsageError(std::string(kSeedEnv) + " must be an unsigned integer");
  }
  return v;
}

FitTarget parse_target(const std::string& name) {
  if (name == "raw") return FitTarget::Raw;
  if (name == "abs") return FitTarget::Abs;
  if (name == "envelope") return FitTarget::Envelope;
  throw Error(Errc::InvalidConfig, "fit target must be raw, abs or envelope");
}

SplitCriterion parse_criterion(const std::string& name) {
  if (name == "entropy") return SplitCriterion::Entropy;
  if (name == "gini") return SplitCriterion::Gini;
  throw Error(Errc::InvalidConfig, "criterion must be entropy or gini");
}

FaultClass parse_class(const std::string& token) {
  auto c = parse_fault_token(token);
  if (!c) throw Error(Errc::InvalidConfig, "unknown fault class '" + token + "'");
  return *c;
}

std::vector<FeatureSet> parse_feature_list(const std::vector<std::string>& names) {
  std::vector<FeatureSet> sets;
  for (const auto& n : names) {
    if (n == "all") {
      auto all = all_feature_sets();
      sets.insert(sets.end(), all.begin(), all.end());
    } else {
      sets.push_back(FeatureSet::parse(n));
    }
  }
  return sets;
}

// Hyperparameter flags shared by train and grid.
struct ModelFlags {
  std::string criterion = "entropy";
  int max_depth = 32;
  std::size_t hidden = 40;
  double learning_rate = 0.0075;
  long long iterations = 200000;
  double gamma = 0.1;
  double c = 0.8;
  std::size_t scn_nodes = 40;

  void add_to(CLI::App& app) {
    app.add_option("--criterion", criterion, "Tree split heuristic (entropy|gini)")
        ->capture_default_str();
    app.add_option("--max-depth", max_depth, "Tree depth cap")->capture_default_str();
    app.add_option("--hidden", hidden, "BP hidden nodes")->capture_default_str();
    app.add_option("--lr", learning_rate, "BP learning rate")->capture_default_str();
    app.add_option("--iterations", iterations, "BP SGD iterations")->capture_default_str();
    app.add_option("--gamma", gamma, "SVM RBF gamma")->capture_default_str();
    app.add_option("--C", c, "SVM soft-margin C")->capture_default_str();
    app.add_option("--scn-nodes", scn_nodes, "SCN maximum hidden nodes")->capture_default_str();
  }

  void apply(ClassifierSettings& s, const CLI::App& app) const {
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--criterion")) s.tree.criterion = parse_criterion(criterion);
    if (given("--max-depth")) s.tree.max_depth = max_depth;
    if (given("--hidden")) s.bp.hidden = hidden;
    if (given("--lr")) s.bp.learning_rate = learning_rate;
    if (given("--iterations")) s.bp.iterations = iterations;
    if (given("--gamma")) s.svm.gamma = gamma;
    if (given("--C")) s.svm.c = c;
    if (given("--scn-nodes")) s.scn.max_nodes = scn_nodes;
  }
};

// --- config loading --------------------------------------------------------

void apply_defect_key(DefectSignature& d, const std::string& field, const json& v) {
  if (field == "order") d.order = v.get<double>();
  else if (field == "resonance_hz") d.resonance_hz = v.get<double>();
  else if (field == "decay_s") d.decay_s = v.get<double>();
  else if (field == "amplitude") d.amplitude = v.get<double>();
  else if (field == "modulation_order") d.modulation_order = v.get<double>();
  else if (field == "modulation_depth") d.modulation_depth = v.get<double>();
  else throw Error(Errc::InvalidConfig, "unknown defect field '" + field + "'");
}

void apply_config_key(ExperimentSpec& spec, const std::string& key, const json& v,
                      const std::filesystem::path& base_dir) {
  auto& synth = spec.synthesis;
  auto& s = spec.settings;
  if (key == "seed") spec.seed = v.get<std::uint64_t>();
  else if (key == "folds") spec.folds = v.get<int>();
  else if (key == "holdout") spec.holdout = v.get<bool>();
  else if (key == "split_train") spec.split.train = v.get<int>();
  else if (key == "split_test") spec.split.test = v.get<int>();
  else if (key == "jobs") spec.jobs = v.get<int>();
  else if (key == "recordings") {
    spec.recordings.clear();
    for (const auto& p : v) {
      std::filesystem::path path = p.get<std::string>();
      spec.recordings.push_back(path.is_relative() ? base_dir / path : path);
    }
  } else if (key == "speeds_hz") synth.speeds_hz = v.get<std::vector<double>>();
  else if (key == "sampling_rates_hz") synth.sampling_rates_hz = v.get<std::vector<double>>();
  else if (key == "classes") {
    synth.classes.clear();
    for (const auto& c : v) synth.classes.push_back(parse_class(c.get<std::string>()));
  } else if (key == "duration_s") synth.duration_s = v.get<double>();
  else if (key == "noise_std") synth.noise_std = v.get<double>();
  else if (key == "snr_db") {
    if (v.is_null()) synth.snr_db.reset();
    else synth.snr_db = v.get<double>();
  } else if (key == "feature_sets") spec.feature_sets = parse_feature_list(v.get<std::vector<std::string>>());
  else if (key == "classifiers") {
    spec.classifiers.clear();
    for (const auto& c : v) spec.classifiers.push_back(parse_classifier(c.get<std::string>()));
  } else if (key == "window_len") spec.extraction.window.window_len = v.get<std::size_t>();
  else if (key == "shift") spec.extraction.window.shift = v.get<std::size_t>();
  else if (key == "stats_on_cepstrum") spec.extraction.stats_on_cepstrum = v.get<bool>();
  else if (key == "fit_target") spec.extraction.fit.target = parse_target(v.get<std::string>());
  else if (key == "fit_max_iter") spec.extraction.fit.max_iter = v.get<int>();
  else if (key == "fit_hamming_taper") spec.extraction.fit.hamming_taper = v.get<bool>();
  else if (key == "tree_criterion") s.tree.criterion = parse_criterion(v.get<std::string>());
  else if (key == "tree_max_depth") s.tree.max_depth = v.get<std::size_t>();
  else if (key == "bp_hidden") s.bp.hidden = v.get<std::size_t>();
  else if (key == "bp_learning_rate") s.bp.learning_rate = v.get<double>();
  else if (key == "bp_iterations") s.bp.iterations = v.get<long long>();
  else if (key == "svm_gamma") s.svm.gamma = v.get<double>();
  else if (key == "svm_c") s.svm.c = v.get<double>();
  else if (key == "scn_max_nodes") s.scn.max_nodes = v.get<std::size_t>();
  else if (key == "scn_candidate_pool") s.scn.candidate_pool = v.get<std::size_t>();
  else if (key == "scn_supervisory") s.scn.supervisory = v.get<bool>();
  else if (key == "scn_node_sweep") spec.scn_node_sweep = v.get<std::vector<std::size_t>>();
  else if (key == "shaft_amplitude") synth.base.shaft_amplitude = v.get<double>();
  else if (key == "mesh_order") synth.base.mesh_order = v.get<double>();
  else if (key == "mesh_harmonics") synth.base.mesh_harmonic_amplitudes = v.get<std::vector<double>>();
  else if (key == "channel2_gain") synth.base.channel2_gain = v.get<double>();
  else if (key == "timing_jitter") synth.base.timing_jitter = v.get<double>();
  else if (key.starts_with("outer_")) apply_defect_key(synth.base.outer, key.substr(6), v);
  else if (key.starts_with("inner_")) apply_defect_key(synth.base.inner, key.substr(6), v);
  else if (key.starts_with("ball_")) apply_defect_key(synth.base.ball, key.substr(5), v);
  else throw Error(Errc::InvalidConfig, "unknown config key '" + key + "'");
}

// --- subcommands -----------------------------------------------------------

struct Common {
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out;

  void add_to(CLI::App& app, bool with_jobs) {
    app.add_option("--seed", seed, "Random seed (default: $VIBDIAG_SEED or 0)");
    if (with_jobs) {
      app.add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    }
    app.add_option("-o,--out", out, "Output file (default: stdout)");
  }

  std::uint64_t effective_seed(std::optional<std::uint64_t> fallback = std::nullopt) const {
    if (seed) return *seed;
    if (fallback) return *fallback;
    return env_seed();
  }
};

struct WindowFlags {
  std::size_t window = 250;
  std::size_t shift = 100;
  std::string target = "raw";
  int max_iter = 200;

  void add_to(CLI::App& app) {
    app.add_option("--window", window, "Frame length in samples")->capture_default_str();
    app.add_option("--shift", shift, "Frame shift in samples")->capture_default_str();
    app.add_option("--target", target, "Gaussian fit target (raw|abs|envelope)")->capture_default_str();
    app.add_option("--max-iter", max_iter, "Levenberg-Marquardt iteration cap")->capture_default_str();
  }

  ExtractionConfig extraction(int jobs) const {
    ExtractionConfig cfg;
    cfg.window = {window, shift};
    cfg.fit.target = parse_target(target);
    cfg.fit.max_iter = max_iter;
    cfg.jobs = jobs;
    return cfg;
  }
};

FeatureSet feature_set_from(const std::string& kind, int terms) {
  if (kind == "statistical") return {FeatureKind::Statistical, 0};
  if (kind == "gauss" || kind == "parametric") return FeatureSet::parse("gauss-" + std::to_string(terms));
  if (kind == "stacked") return FeatureSet::parse("stacked-" + std::to_string(terms));
  return FeatureSet::parse(kind);
}

void print_confusion(std::ostream& os, const ConfusionMatrix& m) {
  os << "true\\pred";
  for (FaultClass c : kAllClasses) os << ',' << fault_token(c);
  os << '\n';
  for (FaultClass t : kAllClasses) {
    os << fault_token(t);
    for (FaultClass p : kAllClasses) {
      os << ',' << m[static_cast<std::size_t>(class_index(t))][static_cast<std::size_t>(class_index(p))];
    }
    os << '\n';
  }
}

}  // namespace

ExperimentSpec load_grid_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::InvalidConfig, "config must be a JSON object");
  ExperimentSpec spec;
  for (const auto& [key, value] : doc.items()) {
    if (key.starts_with("_")) continue;  // comments
    try {
      apply_config_key(spec, key, value, base_dir);
    } catch (const json::exception& e) {
      throw Error(Errc::InvalidConfig, "config key '" + key + "': " + e.what());
    }
  }
  return spec;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vibration fault diagnosis: cepstral statistics, Gaussian-fit features, classifiers"};
  app.name("vibdiag");
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Write synthetic recordings in the corpus text format");
  Common synth_common;
  synth_common.add_to(*synth, false);
  std::vector<std::string> synth_classes{"all"};
  double synth_speed = 20.0;
  double synth_fs = 20480.0;
  double synth_duration = 10.0;
  double synth_noise = 0.0;
  std::optional<double> synth_snr;
  std::string synth_dir = ".";
  synth->add_option("--class", synth_classes, "Fault classes (Normal, Outer, Inner, Ball, Combo or all)")
      ->capture_default_str();
  synth->add_option("--speed", synth_speed, "Rotating speed in Hz")->capture_default_str();
  synth->add_option("--fs", synth_fs, "Sampling rate in Hz")->capture_default_str();
  synth->add_option("--duration", synth_duration, "Duration in seconds")->capture_default_str();
  auto* noise_opt = synth->add_option("--noise-std", synth_noise, "White noise std")->capture_default_str();
  synth->add_option("--snr-db", synth_snr, "Target SNR in dB (overrides --noise-std)")->excludes(noise_opt);
  synth->add_option("--out-dir", synth_dir, "Directory for the recordings")->capture_default_str();

  // features
  auto* features = app.add_subcommand("features", "Extract a feature CSV from recordings");
  Common feat_common;
  feat_common.add_to(*features, true);
  WindowFlags feat_window;
  feat_window.add_to(*features);
  std::vector<std::string> feat_inputs;
  std::string feat_kind = "stacked";
  int feat_terms = 6;
  features->add_option("inputs", feat_inputs, "Recording files")->required()->check(CLI::ExistingFile);
  features->add_option("--kind", feat_kind, "statistical|gauss|stacked")->capture_default_str();
  features->add_option("--terms", feat_terms, "Gaussian terms (2..7)")->capture_default_str();

  // fit
  auto* fit = app.add_subcommand("fit", "Fit an n-term Gaussian model to one frame");
  Common fit_common;
  fit_common.add_to(*fit, false);
  WindowFlags fit_window;
  fit_window.add_to(*fit);
  std::string fit_input;
  int fit_terms = 6;
  int fit_channel = 1;
  std::size_t fit_frame = 0;
  fit->add_option("input", fit_input, "Recording file")->required()->check(CLI::ExistingFile);
  fit->add_option("--terms", fit_terms, "Gaussian terms (2..7)")->capture_default_str();
  fit->add_option("--channel", fit_channel, "Channel (1 or 2)")->capture_default_str()->check(CLI::Range(1, 2));
  fit->add_option("--frame", fit_frame, "Frame index")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "Train a classifier on a feature CSV");
  Common train_common;
  train_common.add_to(*train, false);
  ModelFlags train_flags;
  train_flags.add_to(*train);
  std::string train_input;
  std::string train_kind = "tree";
  train->add_option("input", train_input, "Feature CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--classifier", train_kind, "tree|bp|svm|scn")->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "Score a trained model on a feature CSV");
  Common eval_common;
  eval_common.add_to(*eval, false);
  std::string eval_input;
  std::string eval_model;
  eval->add_option("input", eval_input, "Feature CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--model", eval_model, "Model JSON from `train`")->required()->check(CLI::ExistingFile);

  // grid
  auto* grid = app.add_subcommand("grid", "Run the cross-validated experiment grid");
  Common grid_common;
  grid_common.add_to(*grid, true);
  ModelFlags grid_flags;
  grid_flags.add_to(*grid);
  std::string grid_config;
  std::string grid_format = "table";
  std::vector<std::string> grid_features;
  std::vector<std::string> grid_classifiers;
  std::vector<std::size_t> grid_sweep;
  std::vector<std::string> grid_recordings;
  std::optional<int> grid_folds;
  std::optional<double> grid_duration;
  std::optional<double> grid_snr;
  bool grid_timing = false;
  grid->add_option("--config", grid_config, "Flat JSON experiment config")->check(CLI::ExistingFile);
  grid->add_option("--format", grid_format, "Report format (table|csv|json)")->capture_default_str();
  grid->add_option("--features", grid_features, "Feature sets, e.g. statistical gauss-6 stacked-6 or all");
  grid->add_option("--classifiers", grid_classifiers, "Classifiers (tree bp svm scn)");
  grid->add_option("--sweep-nodes", grid_sweep, "Extra SCN runs for these hidden-node counts");
  grid->add_option("--recordings", grid_recordings, "Recording files instead of synthetic data")
      ->check(CLI::ExistingFile);
  grid->add_option("--folds", grid_folds, "Cross-validation folds");
  grid->add_option("--duration", grid_duration, "Synthetic duration per recording in seconds");
  grid->add_option("--snr-db", grid_snr, "Synthetic SNR in dB");
  grid->add_flag("--timing", grid_timing, "Include wall-clock seconds per cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "vibdiag: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (synth->parsed()) {
      const std::uint64_t seed = synth_common.effective_seed();
      err << "vibdiag: seed " << seed << '\n';
      std::vector<FaultClass> classes;
      for (const auto& c : synth_classes) {
        if (c == "all") classes.insert(classes.end(), kAllClasses.begin(), kAllClasses.end());
        else classes.push_back(parse_class(c));
      }
      std::filesystem::create_directories(synth_dir);
      for (FaultClass c : classes) {
        SynthesisConfig cfg;
        cfg.fault = c;
        cfg.speed_hz = synth_speed;
        cfg.fs_hz = synth_fs;
        cfg.duration_s = synth_duration;
        cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(class_index(c)));
        cfg.noise_std = synth_snr ? noise_std_for_snr(cfg, *synth_snr) : synth_noise;
        const RawRecording rec = synthesize_recording(cfg);
        const auto path = std::filesystem::path(synth_dir) /
                          (corpus_filename(c, static_cast<int>(synth_speed), static_cast<int>(synth_fs)) + ".txt");
        save_signal_file(rec, path);
        out << path.string() << '\n';
      }
      return kExitOk;
    }

    if (features->parsed()) {
      err << "vibdiag: seed " << feat_common.effective_seed() << '\n';
      const FeatureSet set = feature_set_from(feat_kind, feat_terms);
      const ExtractionConfig cfg = feat_window.extraction(feat_common.jobs);
      std::vector<RawRecording> recordings;
      for (const auto& path : feat_inputs) recordings.push_back(load_signal_file(path));
      std::vector<int> terms;
      if (set.kind != FeatureKind::Statistical) terms.push_back(set.n_terms);
      const FeatureBank bank = FeatureBank::extract(recordings, terms, cfg);
      FeatureTable table{set, bank.dataset(set), bank.provenance(),
                         terms.empty() ? 0 : bank.nonconverged(set.n_terms)};
      write_output(format_feature_csv(table), feat_common.out, out);
      err << "vibdiag: " << table.data.size() << " rows, " << table.data.dim() << " features";
      if (!terms.empty()) err << ", " << table.nonconverged_fits << " non-converged fits";
      err << '\n';
      return kExitOk;
    }

    if (fit->parsed()) {
      err << "vibdiag: seed " << fit_common.effective_seed() << '\n';
      const RawRecording rec = load_signal_file(fit_input);
      const ExtractionConfig ext = fit_window.extraction(1);
      ext.window.validate();
      const auto& channel = rec.channels[static_cast<std::size_t>(fit_channel - 1)];
      if (fit_frame >= frame_count(channel.size(), ext.window)) {
        throw Error(Errc::InvalidConfig, "frame index out of range");
      }
      FitConfig cfg = ext.fit;
      cfg.n_terms = fit_terms;
      const auto samples = std::span<const double>(channel).subspan(fit_frame * ext.window.shift,
                                                                    ext.window.window_len);
      const FitResult result = fit_gaussians(samples, cfg);
      json doc;
      doc["n_terms"] = fit_terms;
      doc["channel"] = fit_channel;
      doc["frame"] = fit_frame;
      json terms = json::array();
      for (const auto& t : result.model.terms) {
        terms.push_back({{"amplitude", t.amplitude}, {"center", t.center}, {"width", t.width}});
      }
      doc["terms"] = terms;
      doc["features"] = parametric_features(result);
      doc["sse"] = result.sse;
      doc["initial_sse"] = result.initial_sse;
      doc["iterations"] = result.iterations;
      doc["converged"] = result.converged;
      doc["sse_trace"] = result.sse_trace;
      write_output(doc.dump(1) + "\n", fit_common.out, out);
      return kExitOk;
    }

    if (train->parsed()) {
      const std::uint64_t seed = train_common.effective_seed();
      err << "vibdiag: seed " << seed << '\n';
      const FeatureTable table = parse_feature_csv(read_text(train_input));
      ClassifierSettings settings;
      train_flags.apply(settings, *train);
      const ClassifierKind kind = parse_classifier(train_kind);
      const TrainedClassifier clf = train_classifier(kind, table.data, settings, seed);
      std::size_t hits = 0;
      for (std::size_t i = 0; i < table.data.size(); ++i) {
        if (clf.predict(table.data.row(i)) == table.data.labels[i]) ++hits;
      }
      write_output(serialize_classifier(clf), train_common.out, out);
      err << "vibdiag: training accuracy " << static_cast<double>(hits) / static_cast<double>(table.data.size())
          << '\n';
      return kExitOk;
    }

    if (eval->parsed()) {
      err << "vibdiag: seed " << eval_common.effective_seed() << '\n';
      const TrainedClassifier clf = deserialize_classifier(read_text(eval_model));
      const FeatureTable table = parse_feature_csv(read_text(eval_input));
      ConfusionMatrix confusion{};
      for (std::size_t i = 0; i < table.data.size(); ++i) {
        const FaultClass p = clf.predict(table.data.row(i));
        ++confusion[static_cast<std::size_t>(class_index(table.data.labels[i]))]
                   [static_cast<std::size_t>(class_index(p))];
      }
      std::ostringstream os;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", accuracy(confusion));
      os << "classifier," << classifier_name(clf.kind) << "\naccuracy," << buf << '\n';
      print_confusion(os, confusion);
      write_output(os.str(), eval_common.out, out);
      return kExitOk;
    }

    if (grid->parsed()) {
      ExperimentSpec spec;
      std::optional<std::uint64_t> config_seed;
      if (!grid_config.empty()) {
        const std::filesystem::path path = grid_config;
        const std::string text = read_text(path);
        spec = load_grid_config(text, path.parent_path());
        if (json::parse(text).contains("seed")) config_seed = spec.seed;
      }
      spec.seed = grid_common.effective_seed(config_seed);
      err << "vibdiag: seed " << spec.seed << '\n';
      if (grid->count("--jobs") > 0) spec.jobs = grid_common.jobs;
      grid_flags.apply(spec.settings, *grid);
      if (!grid_features.empty()) spec.feature_sets = parse_feature_list(grid_features);
      if (!grid_classifiers.empty()) {
        spec.classifiers.clear();
        for (const auto& c : grid_classifiers) spec.classifiers.push_back(parse_classifier(c));
      }
      if (!grid_sweep.empty()) spec.scn_node_sweep = grid_sweep;
      if (!grid_recordings.empty()) {
        spec.recordings.assign(grid_recordings.begin(), grid_recordings.end());
      }
      if (grid_folds) spec.folds = *grid_folds;
      if (grid_duration) spec.synthesis.duration_s = *grid_duration;
      if (grid_snr) spec.synthesis.snr_db = *grid_snr;
      if (grid_format != "table" && grid_format != "csv" && grid_format != "json") {
        throw UsageError("--format must be table, csv or json");
      }
      spec.progress = [&err](const std::string& msg) { err << "vibdiag: " << msg << '\n'; };
      const ExperimentReport report = run_grid(spec);
      std::string text;
      if (grid_format == "csv") text = report_csv(report, grid_timing);
      else if (grid_format == "json") text = report_json(report, grid_timing);
      else text = report_table(report);
      write_output(text, grid_common.out, out);
      std::size_t failed = 0;
      for (const auto& c : report.cells) {
        if (c.failed) {
          ++failed;
          err << "vibdiag: cell " << c.feature_set.name() << '/' << classifier_name(c.classifier)
              << " failed: " << c.error << '\n';
        }
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "vibdiag: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "vibdiag: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace vibdiag::cli
