// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <cstdint>

#include "maskaid/signal.hpp"

namespace maskaid {

// Deterministic synthetic material for demos and tests: no external corpora.

// Speech-like signal: voiced harmonic syllables with formant coloring, pitch
// glides, syllabic gating, and occasional unvoiced bursts. RMS-normalized.
AudioSignal synth_speech(uint64_t seed, double duration_s);

enum class NoiseKind { stationary, modulated };

// Speech-shaped noise (about -6 dB/oct above 500 Hz); the modulated variant
// adds slow amplitude modulation. RMS-normalized.
AudioSignal synth_noise(uint64_t seed, double duration_s,
                        NoiseKind kind = NoiseKind::stationary);

}  // namespace maskaid
