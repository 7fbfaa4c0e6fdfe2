// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <array>
#include <vector>

#include "maskaid/audiogram.hpp"
#include "maskaid/signal.hpp"

namespace maskaid {

// Linear-prescription constants, shipped as a data file. Gains are computed
// at the reference frequencies as
//   g(f) = x + 0.31 * HL(f) + k(f),
// with x = 0.05 * (HL500 + HL1000 + HL2000) (switching to the steeper severe
// branch above the three-frequency-sum threshold), clamped to >= 0 dB, and
// interpolated to the audiometric grid. A fully normal audiogram prescribes
// the transparent filter.
struct NalrConstants {
  std::vector<double> freqs_hz;   // reference grid (6 points)
  std::vector<double> bias_db;    // per-frequency constants k(f)
  double hl_coeff = 0.31;
  double x_slope = 0.05;
  double severe_threshold = 180.0;  // three-frequency sum in dB
  double severe_base = 9.0;
  double severe_slope = 0.116;

  static NalrConstants load_default();
};

struct NalrPrescription {
  std::array<double, kNumAudiometricFreqs> gains_db{};
  std::vector<double> fir;  // linear phase, nfir + 1 taps
  int nfir = 128;

  double group_delay_samples() const { return nfir / 2.0; }
};

NalrPrescription nalr_gains(const Audiogram& a, int nfir = 128,
                            double fs = kSampleRate);
NalrPrescription nalr_gains(const Audiogram& a, const NalrConstants& c,
                            int nfir = 128, double fs = kSampleRate);

AudioSignal nalr_apply(const AudioSignal& x, const NalrPrescription& p);

}  // namespace maskaid
