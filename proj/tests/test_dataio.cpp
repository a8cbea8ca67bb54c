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

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <string>

#include "doctest.h"
#include "vibdiag/dataio.hpp"
#include "vibdiag/error.hpp"

using namespace vibdiag;

namespace {

// Magnitude of the plain DFT of `x` evaluated at frequency `f`.
double dft_magnitude(const std::vector<double>& x, double fs, double f) {
  std::complex<double> acc = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    acc += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(t) / fs);
  }
  return std::abs(acc) / static_cast<double>(x.size());
}

SynthesisConfig short_config(FaultClass fault, std::uint64_t seed = 7) {
  SynthesisConfig cfg;
  cfg.fault = fault;
  cfg.duration_s = 1.0;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("dataio") {

TEST_CASE("filename tokens decode") {
  const FileTag tag = parse_filename("data/Outer_20Hz_Fs20480.txt");
  CHECK(tag.label == FaultClass::Outer);
  CHECK(tag.speed_hz == 20);
  CHECK(tag.fs_hz == 20480);
  CHECK(parse_filename("ComBO_30Hz_Fs51200").label == FaultClass::Combo);
  CHECK(parse_filename("combo_30Hz_Fs51200.txt").label == FaultClass::Combo);
  CHECK_THROWS_AS(parse_filename("Gear_20Hz_Fs20480.txt"), Error);
  CHECK_THROWS_AS(parse_filename("Outer_20Hz.txt"), Error);
  CHECK_THROWS_AS(parse_filename("Outer_20Hz_Fs12345.txt"), Error);
  try {
    parse_filename("nonsense.txt");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnparseableFilename);
  }
}

TEST_CASE("filename format and parse are inverse") {
  for (FaultClass c : kAllClasses) {
    for (int fs : kCorpusSamplingRates) {
      const FileTag tag = parse_filename(corpus_filename(c, 25, fs));
      CHECK(tag.label == c);
      CHECK(tag.speed_hz == 25);
      CHECK(tag.fs_hz == fs);
    }
  }
  CHECK(corpus_filename(FaultClass::Combo, 20, 5120) == "ComBO_20Hz_Fs5120");
}

TEST_CASE("class index encoding is stable") {
  for (int i = 0; i < kNumClasses; ++i) CHECK(class_index(class_from_index(i)) == i);
  CHECK_THROWS_AS(class_from_index(5), Error);
  CHECK(parse_fault_token("inner") == FaultClass::Inner);
  CHECK_FALSE(parse_fault_token("gear").has_value());
}

TEST_CASE("signal text parses three columns") {
  const RawRecording rec =
      parse_signal_file("0 1.5 -2\n0.001 2.5 -3\n\n", "Ball_20Hz_Fs5120.txt");
  CHECK(rec.label == FaultClass::Ball);
  CHECK(rec.size() == 2);
  CHECK(rec.channels[0][1] == doctest::Approx(2.5));
  CHECK(rec.channels[1][0] == doctest::Approx(-2.0));
  REQUIRE(rec.timestamps.has_value());
  CHECK((*rec.timestamps)[1] == doctest::Approx(0.001));
}

TEST_CASE("malformed lines report their line number") {
  try {
    parse_signal_file("0 1 2\n0.1 x 3\n", "Normal_20Hz_Fs5120.txt");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MalformedLine);
    CHECK(e.line() == 2);
  }
  try {
    parse_signal_file("0 1\n", "Normal_20Hz_Fs5120.txt");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MalformedLine);
    CHECK(e.line() == 1);
  }
  try {
    parse_signal_file("", "Normal_20Hz_Fs5120.txt");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyFile);
  }
}

TEST_CASE("text round trip keeps printed precision") {
  SynthesisConfig cfg = short_config(FaultClass::Inner);
  cfg.duration_s = 0.1;
  cfg.noise_std = 0.05;
  const RawRecording rec = synthesize_recording(cfg);
  const RawRecording back = parse_signal_file(format_signal_file(rec), "Inner_20Hz_Fs20480.txt");
  REQUIRE(back.size() == rec.size());
  for (int ch = 0; ch < 2; ++ch) {
    for (std::size_t i = 0; i < rec.size(); ++i) {
      const double a = rec.channels[ch][i];
      CHECK(std::abs(back.channels[ch][i] - a) <= 5e-6 * std::max(std::abs(a), 1e-300) + 1e-300);
    }
  }
  // Timestamps stay distinct at 1/fs resolution.
  REQUIRE(back.timestamps.has_value());
  for (std::size_t i = 1; i < back.size(); ++i) {
    CHECK((*back.timestamps)[i] > (*back.timestamps)[i - 1]);
  }
}

TEST_CASE("file save and load") {
  const auto dir = std::filesystem::temp_directory_path() / "vibdiag_dataio_test";
  std::filesystem::create_directories(dir);
  SynthesisConfig cfg = short_config(FaultClass::Normal);
  cfg.duration_s = 0.05;
  const RawRecording rec = synthesize_recording(cfg);
  const auto path = dir / corpus_filename(FaultClass::Normal, 20, 20480);
  save_signal_file(rec, path);
  const RawRecording back = load_signal_file(path);
  CHECK(back.size() == rec.size());
  CHECK(back.rotating_speed_hz == 20.0);
  CHECK(back.sampling_rate_hz == 20480.0);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_signal_file(dir / "Normal_20Hz_Fs5120.txt"), Error);
}

TEST_CASE("synthesis is seeded") {
  SynthesisConfig cfg = short_config(FaultClass::Combo);
  cfg.noise_std = 0.1;
  const RawRecording a = synthesize_recording(cfg);
  const RawRecording b = synthesize_recording(cfg);
  CHECK(a.channels == b.channels);
  cfg.seed += 1;
  CHECK(synthesize_recording(cfg).channels != a.channels);
  CHECK(a.size() == 20480);
  CHECK(a.label == FaultClass::Combo);
}

TEST_CASE("outer race defect shows up at its impact rate") {
  const SynthesisConfig outer = short_config(FaultClass::Outer);
  const SynthesisConfig normal = short_config(FaultClass::Normal);
  const RawRecording a = synthesize_recording(outer);
  const RawRecording b = synthesize_recording(normal);
  const double rate = outer.outer.order * outer.speed_hz;
  const double with_defect = dft_magnitude(a.channels[0], outer.fs_hz, rate);
  const double without = dft_magnitude(b.channels[0], normal.fs_hz, rate);
  CHECK(with_defect > 10.0 * without);
  // And it is a local peak, not a broadband rise.
  CHECK(with_defect > 3.0 * dft_magnitude(a.channels[0], outer.fs_hz, rate * 1.5));
}

TEST_CASE("normal class has no active defects, combo has two") {
  SynthesisConfig cfg;
  cfg.fault = FaultClass::Normal;
  CHECK(active_defects(cfg).empty());
  cfg.fault = FaultClass::Combo;
  CHECK(active_defects(cfg).size() == 2);
  cfg.fault = FaultClass::Ball;
  CHECK(active_defects(cfg).size() == 1);
}

TEST_CASE("snr noise level matches the target") {
  SynthesisConfig cfg = short_config(FaultClass::Inner);
  const double sd = noise_std_for_snr(cfg, 10.0);
  const RawRecording clean = synthesize_recording(cfg);
  double power = 0;
  for (double v : clean.channels[0]) power += v * v;
  power /= static_cast<double>(clean.size());
  CHECK(10.0 * std::log10(power / (sd * sd)) == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("synthesis rejects aliasing and bad parameters") {
  SynthesisConfig cfg = short_config(FaultClass::Inner);
  cfg.fs_hz = 200.0;
  CHECK_THROWS_AS(synthesize_recording(cfg), Error);
  cfg = short_config(FaultClass::Inner);
  cfg.noise_std = -1.0;
  CHECK_THROWS_AS(synthesize_recording(cfg), Error);
  cfg = short_config(FaultClass::Inner);
  cfg.duration_s = 0.0;
  CHECK_THROWS_AS(synthesize_recording(cfg), Error);
}

}  // TEST_SUITE
