// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <array>
#include <string>
#include <vector>

namespace maskaid {

inline constexpr int kNumAudiometricFreqs = 10;

// The fixed audiometric frequency grid in Hz.
const std::array<double, kNumAudiometricFreqs>& audiometric_frequencies();

// Hearing thresholds in dB HL at the fixed audiometric frequencies.
struct Audiogram {
  std::array<double, kNumAudiometricFreqs> thresholds_db{};

  // Throws ValidationError when any threshold is outside [0, 105] dB.
  void validate() const;
  bool is_normal_hearing() const;
};

Audiogram make_audiogram(const std::array<double, kNumAudiometricFreqs>& t);
Audiogram flat_audiogram(double db);

// The ten standard profiles (N1-N7, S1-S3) plus the flat NH profile, loaded
// from the shipped data file. Order: NH, N1..N7, S1..S3.
struct NamedAudiogram {
  std::string name;
  Audiogram audiogram;
};
const std::vector<NamedAudiogram>& standard_audiograms();
const Audiogram& standard_audiogram(const std::string& name);

// Linear interpolation of thresholds on a log-frequency axis, clamped to the
// edge values outside [250, 6000] Hz.
std::vector<double> interpolate_thresholds(const Audiogram& a,
                                           const std::vector<double>& freqs_hz);

// Thresholds divided by 100, the network-facing conditioning feature.
std::vector<double> audiogram_feature(const Audiogram& a);

}  // namespace maskaid
