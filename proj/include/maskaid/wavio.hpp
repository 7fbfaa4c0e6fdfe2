// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <string>

#include "maskaid/signal.hpp"

namespace maskaid {

enum class WavEncoding { pcm16, float32 };

// RIFF/WAVE, mono, 16 kHz only; PCM16 and IEEE float32 encodings. Sample
// value 1.0 maps to full scale for both. No resampling: any other sample rate
// or channel count raises FormatError.
AudioSignal wav_read(const std::string& path);
void wav_write(const std::string& path, const AudioSignal& x,
               WavEncoding enc = WavEncoding::float32);

}  // namespace maskaid
