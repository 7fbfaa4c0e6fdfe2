// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/nalr.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include "maskaid/datapaths.hpp"
#include "maskaid/errors.hpp"
#include "maskaid/fftutil.hpp"

namespace maskaid {

NalrConstants NalrConstants::load_default() {
  const std::string path = data_file("nalr_constants.tsv");
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  NalrConstants c;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "freq_bias") {
      double f_hz, bias;
      ss >> f_hz >> bias;
      if (!ss) throw FormatError("malformed freq_bias row in " + path);
      c.freqs_hz.push_back(f_hz);
      c.bias_db.push_back(bias);
    } else if (key == "hl_coeff") {
      ss >> c.hl_coeff;
    } else if (key == "x_slope") {
      ss >> c.x_slope;
    } else if (key == "severe_threshold") {
      ss >> c.severe_threshold;
    } else if (key == "severe_base") {
      ss >> c.severe_base;
    } else if (key == "severe_slope") {
      ss >> c.severe_slope;
    } else {
      throw FormatError("unknown key '" + key + "' in " + path);
    }
  }
  if (c.freqs_hz.size() < 3)
    throw FormatError("too few reference frequencies in " + path);
  return c;
}

namespace {

double lin_interp(const std::vector<double>& xs, const std::vector<double>& ys,
                  double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  std::size_t k = 0;
  while (k + 1 < xs.size() && xs[k + 1] < x) ++k;
  const double w = (x - xs[k]) / (xs[k + 1] - xs[k]);
  return (1.0 - w) * ys[k] + w * ys[k + 1];
}

double log_interp(const std::vector<double>& xs, const std::vector<double>& ys,
                  double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  std::size_t k = 0;
  while (k + 1 < xs.size() && xs[k + 1] < x) ++k;
  const double w = (std::log(x) - std::log(xs[k])) /
                   (std::log(xs[k + 1]) - std::log(xs[k]));
  return (1.0 - w) * ys[k] + w * ys[k + 1];
}

// Linear-phase FIR from a dB gain curve sampled on the audiometric grid,
// interpolated on a log-frequency axis with flat extension at the edges.
std::vector<double> design_gain_fir(const std::vector<double>& freqs,
                                    const std::vector<double>& gains_db, int nfir,
                                    double fs) {
  const int ntaps = nfir + 1;
  const std::size_t nfft = std::max<std::size_t>(1024, fftutil::next_pow2(4 * ntaps));
  const std::size_t nbins = nfft / 2 + 1;
  const double delay = nfir / 2.0;
  std::vector<std::complex<double>> spec(nbins);
  for (std::size_t k = 0; k < nbins; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(nfft);
    const double amp = std::pow(10.0, log_interp(freqs, gains_db, f) / 20.0);
    const double ph = -2.0 * M_PI * static_cast<double>(k) * delay /
                      static_cast<double>(nfft);
    spec[k] = std::polar(amp, ph);
  }
  spec[0] = {std::abs(spec[0]), 0.0};
  spec[nbins - 1].imag(0.0);
  std::vector<double> h;
  fftutil::irfft(spec, h, nfft);
  h.resize(ntaps);
  // Hamming taper against truncation ripple.
  for (int n = 0; n < ntaps; ++n)
    h[n] *= 0.54 - 0.46 * std::cos(2.0 * M_PI * n / (ntaps - 1));
  return h;
}

}  // namespace

NalrPrescription nalr_gains(const Audiogram& a, int nfir, double fs) {
  return nalr_gains(a, NalrConstants::load_default(), nfir, fs);
}

NalrPrescription nalr_gains(const Audiogram& a, const NalrConstants& c, int nfir,
                            double fs) {
  a.validate();
  if (nfir < 16 || nfir % 2 != 0)
    throw ValidationError("nalr_gains: nfir must be even and >= 16");
  const auto& af = audiometric_frequencies();
  const std::vector<double> freqs10(af.begin(), af.end());
  const std::vector<double> hl10(a.thresholds_db.begin(), a.thresholds_db.end());

  NalrPrescription p;
  p.nfir = nfir;

  const double max_hl = *std::max_element(hl10.begin(), hl10.end());
  if (max_hl > 0.0) {
    // Raw gains at the reference frequencies, clamped, then interpolated to
    // the audiometric grid (mirroring the prescription's published procedure).
    std::vector<double> hl_ref(c.freqs_hz.size());
    for (std::size_t i = 0; i < c.freqs_hz.size(); ++i)
      hl_ref[i] = lin_interp(freqs10, hl10, c.freqs_hz[i]);
    const double t3 = lin_interp(freqs10, hl10, 500.0) +
                      lin_interp(freqs10, hl10, 1000.0) +
                      lin_interp(freqs10, hl10, 2000.0);
    const double x = (t3 <= c.severe_threshold)
                         ? c.x_slope * t3
                         : c.severe_base + c.severe_slope * (t3 - c.severe_threshold);
    std::vector<double> g_ref(c.freqs_hz.size());
    for (std::size_t i = 0; i < c.freqs_hz.size(); ++i)
      g_ref[i] = std::max(0.0, x + c.hl_coeff * hl_ref[i] + c.bias_db[i]);
    for (int i = 0; i < kNumAudiometricFreqs; ++i)
      p.gains_db[i] = lin_interp(c.freqs_hz, g_ref, freqs10[i]);
  } else {
    p.gains_db.fill(0.0);
  }

  std::vector<double> gains(p.gains_db.begin(), p.gains_db.end());
  p.fir = design_gain_fir(freqs10, gains, nfir, fs);
  return p;
}

AudioSignal nalr_apply(const AudioSignal& x, const NalrPrescription& p) {
  if (x.samples.empty()) throw ValidationError("nalr_apply: empty signal");
  AudioSignal out;
  out.samples.resize(x.samples.size());
  fftutil::convolve_same(x.samples.data(), x.samples.size(), p.fir.data(),
                         p.fir.size(), out.samples.data());
  return out;
}

}  // namespace maskaid
