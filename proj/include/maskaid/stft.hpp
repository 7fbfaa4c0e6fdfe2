// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <cstdint>
#include <vector>

#include "maskaid/signal.hpp"
#include "maskaid/tensor.hpp"

namespace maskaid {

// Hann analysis/synthesis, 32 ms frames, 16 ms hop, FFT size equal to the
// frame length. Frames are centered: the signal is zero-padded by half a
// frame at both ends before analysis.
struct StftGeometry {
  int frame_length = 512;
  int hop = 256;
  int fft_size = 512;

  int num_bins() const { return fft_size / 2 + 1; }
  int num_frames(std::size_t signal_len) const;
  std::vector<double> window() const;  // periodic Hann

  bool operator==(const StftGeometry&) const = default;
};

// Complex time-frequency array stored as separate real/imaginary planes of
// shape (F, T), row-major over bins.
struct Spectrogram {
  int bins = 0;
  int frames = 0;
  std::vector<double> re, im;
  StftGeometry geometry;

  std::size_t size() const { return re.size(); }
  std::size_t idx(int f, int t) const {
    return static_cast<std::size_t>(f) * frames + t;
  }
  static Spectrogram zeros(int bins, int frames, const StftGeometry& g);
};

Spectrogram stft(const AudioSignal& x, const StftGeometry& g);
AudioSignal istft(const Spectrogram& s, const StftGeometry& g, std::size_t out_len);

namespace ad_ops {

// Differentiable iSTFT: (re, im) of shape (F, T) -> waveform of length
// out_len. Linear in both inputs; the backward pass is the exact adjoint.
ad::Tensor istft(const ad::Tensor& re, const ad::Tensor& im,
                 const StftGeometry& g, std::size_t out_len);

// Complex Hadamard product of a mask (mr, mi) with a fixed spectrogram X.
// Mask tensors may be (F, T) or broadcastable (F, 1).
struct ComplexPair {
  ad::Tensor re, im;
};
ComplexPair apply_mask(const ad::Tensor& mr, const ad::Tensor& mi,
                       const Spectrogram& x);
// Real-valued mask fast path.
ComplexPair apply_mask(const ad::Tensor& m, const Spectrogram& x);

}  // namespace ad_ops

}  // namespace maskaid
