// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/stft.hpp"

#include <cmath>
#include <complex>

#include "maskaid/errors.hpp"
#include "maskaid/fftutil.hpp"

namespace maskaid {

namespace {

// Overlap-add state shared by the plain and differentiable iSTFT paths.
// den[n] is the squared-window overlap sum at padded position n; edge frames
// are normalized by the partial sum.
struct OlaPlan {
  int frames;
  std::size_t padded_len;
  std::size_t offset;  // frame_length / 2, start of the reconstruction region
  std::vector<double> window;
  std::vector<double> den;
};

OlaPlan make_ola_plan(const StftGeometry& g, int frames, std::size_t out_len) {
  OlaPlan p;
  p.frames = frames;
  p.window = g.window();
  p.offset = static_cast<std::size_t>(g.frame_length / 2);
  p.padded_len =
      static_cast<std::size_t>(frames - 1) * g.hop + g.frame_length;
  if (p.offset + out_len > p.padded_len)
    throw ShapeError("istft: requested output length exceeds frame coverage");
  p.den.assign(p.padded_len, 0.0);
  for (int t = 0; t < frames; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * g.hop;
    for (int j = 0; j < g.frame_length; ++j)
      p.den[base + j] += p.window[j] * p.window[j];
  }
  return p;
}

void check_geometry(const StftGeometry& g) {
  if (g.fft_size != g.frame_length)
    throw ValidationError("stft: fft size must equal frame length");
  if (g.hop * 2 != g.frame_length)
    throw ValidationError("stft: hop must be half the frame length");
}

}  // namespace

int StftGeometry::num_frames(std::size_t signal_len) const {
  return static_cast<int>(signal_len / hop) + 1;
}

std::vector<double> StftGeometry::window() const {
  std::vector<double> w(frame_length);
  for (int n = 0; n < frame_length; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / frame_length);
  return w;
}

Spectrogram Spectrogram::zeros(int bins, int frames, const StftGeometry& g) {
  Spectrogram s;
  s.bins = bins;
  s.frames = frames;
  s.geometry = g;
  s.re.assign(static_cast<std::size_t>(bins) * frames, 0.0);
  s.im.assign(static_cast<std::size_t>(bins) * frames, 0.0);
  return s;
}

Spectrogram stft(const AudioSignal& x, const StftGeometry& g) {
  check_geometry(g);
  if (x.samples.empty()) throw ValidationError("stft: empty signal");

  const int frames = g.num_frames(x.samples.size());
  const int bins = g.num_bins();
  const std::size_t half = static_cast<std::size_t>(g.frame_length / 2);
  std::vector<double> padded(x.samples.size() + 2 * half, 0.0);
  std::copy(x.samples.begin(), x.samples.end(), padded.begin() + half);
  // Frames must cover the padded tail.
  const std::size_t need =
      static_cast<std::size_t>(frames - 1) * g.hop + g.frame_length;
  if (padded.size() < need) padded.resize(need, 0.0);

  const std::vector<double> w = g.window();
  Spectrogram s = Spectrogram::zeros(bins, frames, g);

  std::vector<double> buf(g.fft_size);
  std::vector<std::complex<double>> spec;
  for (int t = 0; t < frames; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * g.hop;
    for (int j = 0; j < g.frame_length; ++j) buf[j] = padded[base + j] * w[j];
    fftutil::rfft(buf, spec);
    for (int f = 0; f < bins; ++f) {
      s.re[s.idx(f, t)] = spec[f].real();
      s.im[s.idx(f, t)] = spec[f].imag();
    }
  }
  return s;
}

AudioSignal istft(const Spectrogram& s, const StftGeometry& g, std::size_t out_len) {
  check_geometry(g);
  if (s.geometry != g || s.bins != g.num_bins())
    throw ShapeError("istft: spectrogram geometry mismatch");

  OlaPlan p = make_ola_plan(g, s.frames, out_len);
  std::vector<double> acc(p.padded_len, 0.0);
  std::vector<std::complex<double>> spec(s.bins);
  std::vector<double> frame;
  for (int t = 0; t < s.frames; ++t) {
    for (int f = 0; f < s.bins; ++f)
      spec[f] = {s.re[s.idx(f, t)], s.im[s.idx(f, t)]};
    // Only the Hermitian part is meaningful; DC and Nyquist are real.
    spec[0].imag(0.0);
    spec[s.bins - 1].imag(0.0);
    fftutil::irfft(spec, frame, g.fft_size);
    const std::size_t base = static_cast<std::size_t>(t) * g.hop;
    for (int j = 0; j < g.frame_length; ++j)
      acc[base + j] += frame[j] * p.window[j];
  }

  AudioSignal out;
  out.samples.resize(out_len);
  for (std::size_t n = 0; n < out_len; ++n)
    out.samples[n] = acc[p.offset + n] / p.den[p.offset + n];
  return out;
}

namespace ad_ops {

ad::Tensor istft(const ad::Tensor& re, const ad::Tensor& im,
                 const StftGeometry& g, std::size_t out_len) {
  check_geometry(g);
  const int bins = g.num_bins();
  if (re.rank() != 2 || im.rank() != 2 || re.shape() != im.shape() ||
      re.dim(0) != bins)
    throw ShapeError("istft op: inputs must both be (num_bins, frames)");
  const int frames = static_cast<int>(re.dim(1));

  Spectrogram s = Spectrogram::zeros(bins, frames, g);
  s.re = re.values();
  s.im = im.values();
  AudioSignal y = maskaid::istft(s, g, out_len);

  const OlaPlan plan = make_ola_plan(g, frames, out_len);
  const int fft_size = g.fft_size;
  auto backprop = [plan, bins, frames, fft_size, out_len](ad::detail::Node& self) {
    if (self.grad.empty()) return;
    // Adjoint of: spectrum -> irfft -> window -> overlap-add -> normalize.
    std::vector<double> acc_grad(plan.padded_len, 0.0);
    for (std::size_t n = 0; n < out_len; ++n)
      acc_grad[plan.offset + n] = self.grad[n] / plan.den[plan.offset + n];

    std::vector<double> gre(static_cast<std::size_t>(bins) * frames, 0.0);
    std::vector<double> gim(static_cast<std::size_t>(bins) * frames, 0.0);
    std::vector<double> gframe(fft_size);
    std::vector<std::complex<double>> spec;
    const double inv_n = 1.0 / static_cast<double>(fft_size);
    for (int t = 0; t < frames; ++t) {
      const std::size_t base = static_cast<std::size_t>(t) * static_cast<std::size_t>(fft_size / 2);
      for (int j = 0; j < fft_size; ++j)
        gframe[j] = acc_grad[base + j] * plan.window[j];
      fftutil::rfft(gframe, spec);
      for (int f = 0; f < bins; ++f) {
        const double cf = (f == 0 || f == bins - 1) ? 1.0 : 2.0;
        gre[static_cast<std::size_t>(f) * frames + t] = cf * inv_n * spec[f].real();
        gim[static_cast<std::size_t>(f) * frames + t] =
            (f == 0 || f == bins - 1) ? 0.0 : 2.0 * inv_n * spec[f].imag();
      }
    }
    ad::accumulate_grad(self.parents[0].get(), gre);
    ad::accumulate_grad(self.parents[1].get(), gim);
  };

  return ad::make_op({static_cast<int64_t>(out_len)}, std::move(y.samples),
                     {re, im}, backprop);
}

ComplexPair apply_mask(const ad::Tensor& mr, const ad::Tensor& mi,
                       const Spectrogram& x) {
  ad::Tensor xr = ad::constant({x.bins, x.frames}, x.re);
  ad::Tensor xi = ad::constant({x.bins, x.frames}, x.im);
  ComplexPair out;
  out.re = ad::sub(ad::mul(mr, xr), ad::mul(mi, xi));
  out.im = ad::add(ad::mul(mr, xi), ad::mul(mi, xr));
  return out;
}

ComplexPair apply_mask(const ad::Tensor& m, const Spectrogram& x) {
  ad::Tensor xr = ad::constant({x.bins, x.frames}, x.re);
  ad::Tensor xi = ad::constant({x.bins, x.frames}, x.im);
  ComplexPair out;
  out.re = ad::mul(m, xr);
  out.im = ad::mul(m, xi);
  return out;
}

}  // namespace ad_ops

}  // namespace maskaid
