// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Adjustable inference path: per-unit mask exponentiation, combination with
// an alpha-dependent minimum gain, application to the noisy STFT, and
// resynthesis.
#pragma once

#include <string>

#include "maskaid/signal.hpp"
#include "maskaid/stft.hpp"

namespace maskaid {

enum class MaskDomain { real_valued, complex_valued };

struct MaskPair {
  Spectrogram nr;
  Spectrogram hlc;
  MaskDomain domain = MaskDomain::real_valued;

  void validate() const;  // equal shapes; real masks have zero imaginary part
};

struct MixConfig {
  double alpha_nr = 1.0;
  double alpha_hlc = 1.0;
  double g_min_db = -25.0;

  void validate() const;
};

// Per unit: magnitude |M|^alpha, phase alpha * angle(M). Zero-magnitude units
// stay zero for alpha > 0 and become 1 for alpha = 0 (x^0 = 1 convention).
Spectrogram exponentiate(const Spectrogram& m, double alpha);

// Combined mask of Eq-style magnitude flooring: the exponentiated magnitudes
// multiply, phases add, and the magnitude is floored at
// 10^(g_min_db * alpha_nr / 20) after the combination.
Spectrogram combine(const MaskPair& pair, const MixConfig& cfg);

// istft(combine(pair, cfg) applied to stft(x)), same length as x.
AudioSignal apply_and_resynthesize(const AudioSignal& x, const MaskPair& pair,
                                   const MixConfig& cfg, const StftGeometry& g);

// Inspection dump: rank-4 array file (mask, component, bins, frames) with
// masks ordered (NR, HLC) and components (re, im).
void write_mask_dump(const std::string& path, const MaskPair& pair);
MaskPair read_mask_dump(const std::string& path, const StftGeometry& g);

}  // namespace maskaid
