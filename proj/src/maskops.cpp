// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/maskops.hpp"

#include <cmath>

#include "maskaid/arrayio.hpp"
#include "maskaid/errors.hpp"

namespace maskaid {

void MaskPair::validate() const {
  if (nr.bins != hlc.bins || nr.frames != hlc.frames)
    throw ShapeError("mask pair: NR and HLC shapes differ");
  if (domain == MaskDomain::real_valued) {
    for (double v : nr.im)
      if (v != 0.0) throw ValidationError("real-tagged NR mask has imaginary part");
    for (double v : hlc.im)
      if (v != 0.0) throw ValidationError("real-tagged HLC mask has imaginary part");
    for (double v : nr.re)
      if (v < 0.0) throw ValidationError("real-tagged NR mask has negative magnitude");
    for (double v : hlc.re)
      if (v < 0.0) throw ValidationError("real-tagged HLC mask has negative magnitude");
  }
}

void MixConfig::validate() const {
  if (!(alpha_nr >= 0.0 && alpha_nr <= 1.0))
    throw ValidationError("alpha_nr must be in [0, 1]");
  if (!(alpha_hlc >= 0.0 && alpha_hlc <= 1.0))
    throw ValidationError("alpha_hlc must be in [0, 1]");
  if (!(g_min_db < 0.0)) throw ValidationError("g_min_db must be negative");
}

Spectrogram exponentiate(const Spectrogram& m, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ValidationError("exponentiate: alpha must be in [0, 1]");
  Spectrogram out = m;
  for (std::size_t i = 0; i < m.re.size(); ++i) {
    const double r = std::hypot(m.re[i], m.im[i]);
    if (alpha == 0.0) {
      out.re[i] = 1.0;  // x^0 = 1, including the zero-magnitude unit
      out.im[i] = 0.0;
      continue;
    }
    if (r == 0.0) {
      out.re[i] = 0.0;
      out.im[i] = 0.0;
      continue;
    }
    const double mag = std::pow(r, alpha);
    const double ph = alpha * std::atan2(m.im[i], m.re[i]);
    out.re[i] = mag * std::cos(ph);
    out.im[i] = mag * std::sin(ph);
  }
  return out;
}

Spectrogram combine(const MaskPair& pair, const MixConfig& cfg) {
  pair.validate();
  cfg.validate();
  const Spectrogram mnr = exponentiate(pair.nr, cfg.alpha_nr);
  const Spectrogram mhlc = exponentiate(pair.hlc, cfg.alpha_hlc);
  const double g_min_lin = std::pow(10.0, cfg.g_min_db / 20.0);
  const double floor = std::pow(g_min_lin, cfg.alpha_nr);

  Spectrogram out = Spectrogram::zeros(mnr.bins, mnr.frames, mnr.geometry);
  for (std::size_t i = 0; i < out.re.size(); ++i) {
    const double r1 = std::hypot(mnr.re[i], mnr.im[i]);
    const double r2 = std::hypot(mhlc.re[i], mhlc.im[i]);
    const double mag = std::max(r1 * r2, floor);
    const double ph = std::atan2(mnr.im[i], mnr.re[i]) +
                      std::atan2(mhlc.im[i], mhlc.re[i]);
    out.re[i] = mag * std::cos(ph);
    out.im[i] = mag * std::sin(ph);
  }
  return out;
}

AudioSignal apply_and_resynthesize(const AudioSignal& x, const MaskPair& pair,
                                   const MixConfig& cfg, const StftGeometry& g) {
  Spectrogram spec = stft(x, g);
  if (spec.bins != pair.nr.bins || spec.frames != pair.nr.frames)
    throw ShapeError("apply_and_resynthesize: mask/spectrogram shape mismatch");
  const Spectrogram m = combine(pair, cfg);
  Spectrogram y = Spectrogram::zeros(spec.bins, spec.frames, g);
  for (std::size_t i = 0; i < spec.re.size(); ++i) {
    y.re[i] = m.re[i] * spec.re[i] - m.im[i] * spec.im[i];
    y.im[i] = m.re[i] * spec.im[i] + m.im[i] * spec.re[i];
  }
  return istft(y, g, x.samples.size());
}

void write_mask_dump(const std::string& path, const MaskPair& pair) {
  pair.validate();
  Array a;
  const int64_t bins = pair.nr.bins, frames = pair.nr.frames;
  a.shape = {2, 2, bins, frames};
  a.data.reserve(static_cast<std::size_t>(4 * bins * frames));
  for (const auto* plane : {&pair.nr.re, &pair.nr.im, &pair.hlc.re, &pair.hlc.im})
    a.data.insert(a.data.end(), plane->begin(), plane->end());
  write_array(path, a);
}

MaskPair read_mask_dump(const std::string& path, const StftGeometry& g) {
  Array a = read_array(path);
  if (a.shape.size() != 4 || a.shape[0] != 2 || a.shape[1] != 2)
    throw FormatError("mask dump must have shape (2, 2, bins, frames): " + path);
  const int bins = static_cast<int>(a.shape[2]);
  const int frames = static_cast<int>(a.shape[3]);
  const std::size_t plane = static_cast<std::size_t>(bins) * frames;
  MaskPair pair;
  pair.nr = Spectrogram::zeros(bins, frames, g);
  pair.hlc = Spectrogram::zeros(bins, frames, g);
  std::copy(a.data.begin(), a.data.begin() + plane, pair.nr.re.begin());
  std::copy(a.data.begin() + plane, a.data.begin() + 2 * plane, pair.nr.im.begin());
  std::copy(a.data.begin() + 2 * plane, a.data.begin() + 3 * plane, pair.hlc.re.begin());
  std::copy(a.data.begin() + 3 * plane, a.data.begin() + 4 * plane, pair.hlc.im.begin());
  bool complex_vals = false;
  for (double v : pair.nr.im) complex_vals |= (v != 0.0);
  for (double v : pair.hlc.im) complex_vals |= (v != 0.0);
  pair.domain = complex_vals ? MaskDomain::complex_valued : MaskDomain::real_valued;
  return pair;
}

}  // namespace maskaid
