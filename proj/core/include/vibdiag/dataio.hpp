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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vibdiag {

// Stable integer encoding; used as class index everywhere downstream.
enum class FaultClass : int { Normal = 0, Outer = 1, Inner = 2, Ball = 3, Combo = 4 };

inline constexpr int kNumClasses = 5;
inline constexpr std::array<FaultClass, kNumClasses> kAllClasses = {
    FaultClass::Normal, FaultClass::Outer, FaultClass::Inner, FaultClass::Ball,
    FaultClass::Combo};

// Sampling rates used by the test rig's file corpus.
inline constexpr std::array<int, 6> kCorpusSamplingRates = {5120,  10240, 12800,
                                                            20480, 25600, 51200};

constexpr int class_index(FaultClass c) noexcept { return static_cast<int>(c); }
FaultClass class_from_index(int index);

// Token used in corpus filenames ("Normal", "Outer", "Inner", "Ball", "ComBO").
std::string_view fault_token(FaultClass c) noexcept;
// Case-insensitive inverse of fault_token; also accepts "Combo".
std::optional<FaultClass> parse_fault_token(std::string_view token) noexcept;

struct RawRecording {
  FaultClass label = FaultClass::Normal;
  double rotating_speed_hz = 0.0;
  double sampling_rate_hz = 0.0;
  std::array<std::vector<double>, 2> channels;
  std::optional<std::vector<double>> timestamps;

  std::size_t size() const noexcept { return channels[0].size(); }
  // Throws Error(InvalidConfig) when an invariant is violated.
  void validate() const;
};

struct FileTag {
  FaultClass label;
  int speed_hz;
  int fs_hz;
};

// Decodes `<Fault>_<N>Hz_Fs<M>`; directory components and a trailing
// extension are ignored.
FileTag parse_filename(std::string_view filename);
std::string corpus_filename(FaultClass label, int speed_hz, int fs_hz);

RawRecording parse_signal_file(std::string_view text, std::string_view filename);
RawRecording load_signal_file(const std::filesystem::path& path);

// Three space-separated columns per line. Samples use 6 significant digits;
// the time column carries enough decimals to keep 1/fs steps distinct.
std::string format_signal_file(const RawRecording& rec);
void save_signal_file(const RawRecording& rec, const std::filesystem::path& path);

// One periodic impact source. Each impact rings a structural resonance that
// decays exponentially.
struct DefectSignature {
  double order = 1.0;  // impacts per shaft revolution
  double resonance_hz = 1000.0;
  double decay_s = 0.002;
  double amplitude = 1.0;
  double modulation_order = 0.0;  // amplitude modulation rate / speed; 0 = none
  double modulation_depth = 0.0;
};

struct SynthesisConfig {
  FaultClass fault = FaultClass::Normal;
  double speed_hz = 20.0;
  double fs_hz = 20480.0;
  double duration_s = 10.0;
  double noise_std = 0.0;
  std::uint64_t seed = 0;

  // Gear-mesh carrier: shaft tone plus mesh tone harmonics.
  double shaft_amplitude = 0.2;
  double mesh_order = 20.0;
  std::vector<double> mesh_harmonic_amplitudes = {0.2, 0.2};
  double channel2_gain = 0.9;
  double timing_jitter = 0.01;  // fraction of the impact period

  DefectSignature outer{3.57, 150.0, 0.030, 1.2, 0.0, 0.0};
  DefectSignature inner{5.43, 330.0, 0.020, 1.2, 1.0, 0.5};
  DefectSignature ball{4.64, 230.0, 0.030, 0.5, 0.4, 0.4};

  // Highest frequency present in the noiseless signal.
  double highest_component_hz() const;
  void validate() const;
};

// Impact sources active for a class: none for Normal, outer+inner for Combo.
std::vector<DefectSignature> active_defects(const SynthesisConfig& cfg);

RawRecording synthesize_recording(const SynthesisConfig& cfg);

// Noise standard deviation that puts channel 1 at the requested SNR relative
// to the noiseless signal power of `cfg`.
double noise_std_for_snr(const SynthesisConfig& cfg, double snr_db);

}  // namespace vibdiag
