// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/synth.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "maskaid/errors.hpp"
#include "maskaid/fftutil.hpp"
#include "maskaid/rng.hpp"

namespace maskaid {

namespace {

constexpr double kTargetRms = 0.05;

double formant_envelope(double f, double f1, double f2, double f3) {
  auto res = [f](double fc, double bw) {
    const double d = (f - fc) / bw;
    return 1.0 / (1.0 + d * d);
  };
  double env = res(f1, 90.0) + 0.55 * res(f2, 130.0) + 0.25 * res(f3, 220.0);
  if (f > 500.0) env *= std::pow(500.0 / f, 0.45);  // spectral tilt
  return env;
}

void normalize_rms(std::vector<double>& x, double target) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  const double r = std::sqrt(acc / x.size());
  if (r > 0.0) {
    const double g = target / r;
    for (double& v : x) v *= g;
  }
}

// Spectrally shaped white noise segment (FFT-domain weighting).
std::vector<double> shaped_noise(Rng& rng, std::size_t n, double fs,
                                 double lo_hz, double hi_hz, double tilt_hz) {
  const std::size_t m = fftutil::next_pow2(n);
  std::vector<double> w(m);
  for (auto& v : w) v = rng.normal();
  std::vector<std::complex<double>> spec;
  fftutil::rfft(w, spec);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(m);
    double g = 1.0;
    if (f < lo_hz) g *= f / std::max(lo_hz, 1.0);
    if (f > hi_hz) g *= std::exp(-(f - hi_hz) / 1000.0);
    if (tilt_hz > 0.0 && f > tilt_hz) g /= std::sqrt(1.0 + (f / tilt_hz - 1.0));
    spec[k] *= g;
  }
  std::vector<double> out;
  fftutil::irfft(spec, out, m);
  out.resize(n);
  return out;
}

}  // namespace

AudioSignal synth_speech(uint64_t seed, double duration_s) {
  if (duration_s <= 0) throw ValidationError("synth_speech: bad duration");
  Rng rng(seed);
  const double fs = kSampleRate;
  const std::size_t total = static_cast<std::size_t>(duration_s * fs);
  std::vector<double> x(total, 0.0);

  const double f0_base = rng.uniform(95.0, 210.0);
  const double f1 = rng.uniform(350.0, 800.0);
  const double f2 = rng.uniform(1000.0, 2200.0);
  const double f3 = rng.uniform(2400.0, 3200.0);

  std::size_t t = static_cast<std::size_t>(rng.uniform(0.0, 0.05) * fs);
  while (t < total) {
    const double syl_dur = rng.uniform(0.12, 0.32);
    const std::size_t n = std::min(static_cast<std::size_t>(syl_dur * fs), total - t);
    if (n < 200) break;
    const bool unvoiced = rng.next_unit() < 0.2;

    if (unvoiced) {
      Rng sub = rng.fork(t);
      std::vector<double> burst = shaped_noise(sub, n, fs, 1500.0, 5500.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double env = std::sin(M_PI * j / n);
        x[t + j] += 0.35 * burst[j] * env * env;
      }
    } else {
      const double f0a = f0_base * rng.uniform(0.85, 1.15);
      const double f0b = f0a * rng.uniform(0.8, 1.2);
      const double fmax = 7000.0;
      const int nh = static_cast<int>(fmax / std::min(f0a, f0b));
      std::vector<double> amps(nh + 1, 0.0), phases(nh + 1, 0.0);
      for (int k = 1; k <= nh; ++k) {
        amps[k] = formant_envelope(k * f0_base, f1, f2, f3);
        phases[k] = rng.uniform(0.0, 2.0 * M_PI);
      }
      double phase0 = rng.uniform(0.0, 2.0 * M_PI);
      for (std::size_t j = 0; j < n; ++j) {
        const double frac = static_cast<double>(j) / n;
        const double f0 = f0a + (f0b - f0a) * frac;
        phase0 += 2.0 * M_PI * f0 / fs;
        const double env = std::sin(M_PI * frac);
        double s = 0.0;
        for (int k = 1; k <= nh; ++k) {
          if (k * f0 > fmax) break;
          s += amps[k] * std::sin(k * phase0 + phases[k]);
        }
        x[t + j] += s * env * env;
      }
    }
    t += n + static_cast<std::size_t>(rng.uniform(0.03, 0.14) * fs);
  }
  normalize_rms(x, kTargetRms);
  return make_signal(std::move(x));
}

AudioSignal synth_noise(uint64_t seed, double duration_s, NoiseKind kind) {
  if (duration_s <= 0) throw ValidationError("synth_noise: bad duration");
  Rng rng(seed);
  const double fs = kSampleRate;
  const std::size_t total = static_cast<std::size_t>(duration_s * fs);
  std::vector<double> x = shaped_noise(rng, total, fs, 60.0, 7500.0, 500.0);

  if (kind == NoiseKind::modulated) {
    Rng sub = rng.fork(1);
    double lp = 0.0;
    const double a = std::exp(-2.0 * M_PI * 4.0 / fs);  // ~4 Hz modulator
    for (std::size_t j = 0; j < total; ++j) {
      lp = a * lp + (1.0 - a) * sub.normal();
      x[j] *= 0.4 + 0.6 * std::fabs(lp) * 25.0;
    }
  }
  normalize_rms(x, kTargetRms);
  return make_signal(std::move(x));
}

}  // namespace maskaid
