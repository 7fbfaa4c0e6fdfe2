// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <limits>
#include <vector>

namespace maskaid {

inline constexpr double kSampleRate = 16000.0;

// Level convention: a waveform RMS of 1 corresponds to 93.98 dB SPL
// (amplitude 1 is one pascal against the 20 uPa reference).
inline constexpr double kFullScaleDbSpl = 93.98;

// Mono 16 kHz waveform.
struct AudioSignal {
  std::vector<double> samples;
  double sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration() const { return samples.size() / sample_rate; }
};

AudioSignal make_signal(std::vector<double> samples);

double rms(const std::vector<double>& x);

// 93.98 + 20*log10(RMS). An all-zero signal returns -infinity.
double level_db_spl(const AudioSignal& x);

// Scales so that level_db_spl(result) == target. Throws ValidationError on
// an all-zero input.
AudioSignal scale_to_level(const AudioSignal& x, double target_db_spl);
double scale_factor_for_level(const std::vector<double>& x, double target_db_spl);

}  // namespace maskaid
