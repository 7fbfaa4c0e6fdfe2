// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/signal.hpp"

#include <cmath>

#include "maskaid/errors.hpp"

namespace maskaid {

AudioSignal make_signal(std::vector<double> samples) {
  AudioSignal s;
  s.samples = std::move(samples);
  return s;
}

double rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double level_db_spl(const AudioSignal& x) {
  if (x.samples.empty()) throw ValidationError("level_db_spl: empty signal");
  const double r = rms(x.samples);
  if (r == 0.0) return -std::numeric_limits<double>::infinity();
  return kFullScaleDbSpl + 20.0 * std::log10(r);
}

double scale_factor_for_level(const std::vector<double>& x, double target_db_spl) {
  const double r = rms(x);
  if (r == 0.0)
    throw ValidationError("scale_to_level: all-zero signal cannot be scaled");
  const double target_rms = std::pow(10.0, (target_db_spl - kFullScaleDbSpl) / 20.0);
  return target_rms / r;
}

AudioSignal scale_to_level(const AudioSignal& x, double target_db_spl) {
  const double g = scale_factor_for_level(x.samples, target_db_spl);
  AudioSignal out = x;
  for (double& v : out.samples) v *= g;
  return out;
}

}  // namespace maskaid
