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

#include "vibdiag/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>

#include "vibdiag/error.hpp"

namespace vibdiag {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  });
}

// Splits on spaces/tabs and parses exactly three doubles.
bool parse_three(std::string_view line, std::array<double, 3>& out) {
  std::size_t field = 0;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    if (field == 3) return false;
    const char* first = line.data() + pos;
    const char* last = line.data() + end;
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out[field]);
    if (ec != std::errc() || ptr != last || !std::isfinite(out[field])) return false;
    ++field;
    pos = end;
  }
  return field == 3;
}

int time_decimals(double fs) {
  return std::max(6, static_cast<int>(std::ceil(std::log10(fs))) + 2);
}

}  // namespace

FaultClass class_from_index(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw Error(Errc::InvalidConfig, "class index out of range: " + std::to_string(index));
  }
  return static_cast<FaultClass>(index);
}

std::string_view fault_token(FaultClass c) noexcept {
  switch (c) {
    case FaultClass::Normal: return "Normal";
    case FaultClass::Outer: return "Outer";
    case FaultClass::Inner: return "Inner";
    case FaultClass::Ball: return "Ball";
    case FaultClass::Combo: return "ComBO";
  }
  return "Normal";
}

std::optional<FaultClass> parse_fault_token(std::string_view token) noexcept {
  for (FaultClass c : kAllClasses) {
    if (iequals(token, fault_token(c))) return c;
  }
  return std::nullopt;
}

void RawRecording::validate() const {
  if (!(rotating_speed_hz > 0.0) || !(sampling_rate_hz > 0.0)) {
    throw Error(Errc::InvalidConfig, "speed and sampling rate must be positive");
  }
  if (channels[0].empty() || channels[0].size() != channels[1].size()) {
    throw Error(Errc::InvalidConfig, "channels must have equal, non-zero length");
  }
  if (timestamps) {
    if (timestamps->size() != channels[0].size()) {
      throw Error(Errc::InvalidConfig, "timestamps length differs from channels");
    }
    for (std::size_t i = 1; i < timestamps->size(); ++i) {
      if (!((*timestamps)[i] > (*timestamps)[i - 1])) {
        throw Error(Errc::InvalidConfig, "timestamps not strictly increasing");
      }
    }
  }
}

FileTag parse_filename(std::string_view filename) {
  std::string_view stem = filename;
  if (auto slash = stem.find_last_of("/\\"); slash != std::string_view::npos) {
    stem.remove_prefix(slash + 1);
  }
  if (auto dot = stem.find('.'); dot != std::string_view::npos) {
    stem = stem.substr(0, dot);
  }
  static const std::regex pattern(R"(^([A-Za-z]+)_([0-9]+)Hz_Fs([0-9]+)$)",
                                  std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(stem.begin(), stem.end(), m, pattern)) {
    throw Error(Errc::UnparseableFilename, std::string(filename));
  }
  auto label = parse_fault_token(std::string_view(&*m[1].first, m[1].length()));
  if (!label) {
    throw Error(Errc::UnparseableFilename, "unknown fault token in " + std::string(filename));
  }
  FileTag tag{*label, 0, 0};
  try {
    tag.speed_hz = std::stoi(m[2].str());
    tag.fs_hz = std::stoi(m[3].str());
  } catch (const std::exception&) {
    throw Error(Errc::UnparseableFilename, std::string(filename));
  }
  if (tag.speed_hz <= 0 ||
      std::find(kCorpusSamplingRates.begin(), kCorpusSamplingRates.end(), tag.fs_hz) ==
          kCorpusSamplingRates.end()) {
    throw Error(Errc::UnparseableFilename,
                "speed or sampling rate outside corpus grid: " + std::string(filename));
  }
  return tag;
}

std::string corpus_filename(FaultClass label, int speed_hz, int fs_hz) {
  return std::string(fault_token(label)) + "_" + std::to_string(speed_hz) + "Hz_Fs" +
         std::to_string(fs_hz);
}

RawRecording parse_signal_file(std::string_view text, std::string_view filename) {
  const FileTag tag = parse_filename(filename);
  RawRecording rec;
  rec.label = tag.label;
  rec.rotating_speed_hz = tag.speed_hz;
  rec.sampling_rate_hz = tag.fs_hz;
  std::vector<double> times;
  times.reserve(text.size() / 24);
  rec.channels[0].reserve(text.size() / 24);
  rec.channels[1].reserve(text.size() / 24);

  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::optional<std::size_t> first_blank;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (is_blank(line)) {
      if (!first_blank) first_blank = line_no;
      continue;
    }
    if (first_blank) {
      throw Error(Errc::MalformedLine, "blank line inside data at line " +
                  std::to_string(*first_blank), *first_blank);
    }
    std::array<double, 3> v{};
    if (!parse_three(line, v)) {
      throw Error(Errc::MalformedLine, "line " + std::to_string(line_no), line_no);
    }
    if (!times.empty() && !(v[0] > times.back())) {
      throw Error(Errc::MalformedLine,
                  "time not strictly increasing at line " + std::to_string(line_no), line_no);
    }
    times.push_back(v[0]);
    rec.channels[0].push_back(v[1]);
    rec.channels[1].push_back(v[2]);
  }
  if (times.empty()) throw Error(Errc::EmptyFile, std::string(filename));
  rec.timestamps = std::move(times);
  return rec;
}

RawRecording load_signal_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_signal_file(buf.str(), path.filename().string());
}

std::string format_signal_file(const RawRecording& rec) {
  rec.validate();
  const int decimals = time_decimals(rec.sampling_rate_hz);
  std::string out;
  out.reserve(rec.size() * 32);
  char line[128];
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const double t = rec.timestamps ? (*rec.timestamps)[i]
                                    : static_cast<double>(i) / rec.sampling_rate_hz;
    const int n = std::snprintf(line, sizeof line, "%.*f %.6g %.6g\n", decimals, t,
                                rec.channels[0][i], rec.channels[1][i]);
    out.append(line, static_cast<std::size_t>(n));
  }
  return out;
}

void save_signal_file(const RawRecording& rec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << format_signal_file(rec);
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

double SynthesisConfig::highest_component_hz() const {
  double hi = speed_hz;
  for (std::size_t h = 0; h < mesh_harmonic_amplitudes.size(); ++h) {
    if (mesh_harmonic_amplitudes[h] != 0.0) {
      hi = std::max(hi, static_cast<double>(h + 1) * mesh_order * speed_hz);
    }
  }
  for (const auto& d : active_defects(*this)) hi = std::max(hi, d.resonance_hz);
  return hi;
}

void SynthesisConfig::validate() const {
  if (!(speed_hz > 0.0) || !(fs_hz > 0.0) || !(duration_s > 0.0)) {
    throw Error(Errc::InvalidConfig, "speed, fs and duration must be positive");
  }
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw Error(Errc::InvalidConfig, "noise_std must be finite and >= 0");
  }
  if (std::llround(fs_hz * duration_s) < 1) {
    throw Error(Errc::InvalidConfig, "fs * duration yields no samples");
  }
  for (const auto& d : active_defects(*this)) {
    if (!(d.order > 0.0) || !(d.decay_s > 0.0) || !(d.resonance_hz > 0.0)) {
      throw Error(Errc::InvalidConfig, "defect order, resonance and decay must be positive");
    }
  }
  if (!(fs_hz > 2.0 * highest_component_hz())) {
    throw Error(Errc::InvalidConfig, "fs must exceed twice the highest component (" +
                std::to_string(highest_component_hz()) + " Hz)");
  }
}

std::vector<DefectSignature> active_defects(const SynthesisConfig& cfg) {
  switch (cfg.fault) {
    case FaultClass::Normal: return {};
    case FaultClass::Outer: return {cfg.outer};
    case FaultClass::Inner: return {cfg.inner};
    case FaultClass::Ball: return {cfg.ball};
    case FaultClass::Combo: return {cfg.outer, cfg.inner};
  }
  return {};
}

RawRecording synthesize_recording(const SynthesisConfig& cfg) {
  cfg.validate();
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const auto n = static_cast<std::size_t>(std::llround(cfg.fs_hz * cfg.duration_s));
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> mech(n, 0.0);
  const double shaft_phase = kTwoPi * unit(rng);
  std::vector<double> mesh_phase(cfg.mesh_harmonic_amplitudes.size());
  for (double& p : mesh_phase) p = kTwoPi * unit(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / cfg.fs_hz;
    double v = cfg.shaft_amplitude * std::sin(kTwoPi * cfg.speed_hz * t + shaft_phase);
    for (std::size_t h = 0; h < mesh_phase.size(); ++h) {
      const double f = static_cast<double>(h + 1) * cfg.mesh_order * cfg.speed_hz;
      v += cfg.mesh_harmonic_amplitudes[h] * std::sin(kTwoPi * f * t + mesh_phase[h]);
    }
    mech[i] = v;
  }

  for (const DefectSignature& d : active_defects(cfg)) {
    const double period = 1.0 / (d.order * cfg.speed_hz);
    const double start = period * unit(rng);
    const double mod_phase = kTwoPi * unit(rng);
    const double ring_len = 10.0 * d.decay_s;
    for (std::size_t k = 0;; ++k) {
      const double jitter = cfg.timing_jitter * period * (2.0 * unit(rng) - 1.0);
      const double tk = start + static_cast<double>(k) * period + jitter;
      if (tk >= cfg.duration_s) break;
      const double amp =
          d.amplitude * (1.0 + d.modulation_depth *
                                   std::cos(kTwoPi * d.modulation_order * cfg.speed_hz * tk +
                                            mod_phase));
      auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(tk * cfg.fs_hz)));
      for (std::size_t i = first; i < n; ++i) {
        const double dt = static_cast<double>(i) / cfg.fs_hz - tk;
        if (dt > ring_len) break;
        mech[i] += amp * std::exp(-dt / d.decay_s) * std::sin(kTwoPi * d.resonance_hz * dt);
      }
    }
  }

  RawRecording rec;
  rec.label = cfg.fault;
  rec.rotating_speed_hz = cfg.speed_hz;
  rec.sampling_rate_hz = cfg.fs_hz;
  rec.channels[0].resize(n);
  rec.channels[1].resize(n);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    rec.channels[0][i] = mech[i] + cfg.noise_std * noise(rng);
  }
  for (std::size_t i = 0; i < n; ++i) {
    rec.channels[1][i] = cfg.channel2_gain * mech[i] + cfg.noise_std * noise(rng);
  }
  return rec;
}

double noise_std_for_snr(const SynthesisConfig& cfg, double snr_db) {
  SynthesisConfig clean = cfg;
  clean.noise_std = 0.0;
  const RawRecording rec = synthesize_recording(clean);
  double power = 0.0;
  for (double v : rec.channels[0]) power += v * v;
  power /= static_cast<double>(rec.size());
  return std::sqrt(power / std::pow(10.0, snr_db / 10.0));
}

}  // namespace vibdiag
