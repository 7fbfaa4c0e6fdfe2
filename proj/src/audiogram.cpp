// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/audiogram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "maskaid/datapaths.hpp"
#include "maskaid/errors.hpp"

namespace maskaid {

const std::array<double, kNumAudiometricFreqs>& audiometric_frequencies() {
  static const std::array<double, kNumAudiometricFreqs> f = {
      250, 375, 500, 750, 1000, 1500, 2000, 3000, 4000, 6000};
  return f;
}

void Audiogram::validate() const {
  for (double t : thresholds_db) {
    if (!(t >= 0.0 && t <= 105.0))
      throw ValidationError("audiogram threshold out of range [0, 105] dB: " +
                            std::to_string(t));
  }
}

bool Audiogram::is_normal_hearing() const {
  return std::all_of(thresholds_db.begin(), thresholds_db.end(),
                     [](double t) { return t == 0.0; });
}

Audiogram make_audiogram(const std::array<double, kNumAudiometricFreqs>& t) {
  Audiogram a;
  a.thresholds_db = t;
  a.validate();
  return a;
}

Audiogram flat_audiogram(double db) {
  Audiogram a;
  a.thresholds_db.fill(db);
  a.validate();
  return a;
}

namespace {

std::vector<NamedAudiogram> load_standard_audiograms() {
  const std::string path = data_file("standard_audiograms.tsv");
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  std::vector<NamedAudiogram> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    NamedAudiogram na;
    ss >> na.name;
    for (int i = 0; i < kNumAudiometricFreqs; ++i) ss >> na.audiogram.thresholds_db[i];
    if (!ss) throw FormatError("malformed audiogram row in " + path + ": " + line);
    na.audiogram.validate();
    out.push_back(na);
  }
  if (out.size() != 11)
    throw FormatError("expected 11 standard audiograms in " + path + ", found " +
                      std::to_string(out.size()));
  return out;
}

}  // namespace

const std::vector<NamedAudiogram>& standard_audiograms() {
  static std::vector<NamedAudiogram> profiles = load_standard_audiograms();
  return profiles;
}

const Audiogram& standard_audiogram(const std::string& name) {
  for (const auto& na : standard_audiograms())
    if (na.name == name) return na.audiogram;
  throw ValidationError("unknown standard audiogram: " + name);
}

std::vector<double> interpolate_thresholds(const Audiogram& a,
                                           const std::vector<double>& freqs_hz) {
  a.validate();
  const auto& af = audiometric_frequencies();
  std::vector<double> out(freqs_hz.size());
  for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
    const double f = freqs_hz[i];
    if (f <= af.front()) {
      out[i] = a.thresholds_db.front();
    } else if (f >= af.back()) {
      out[i] = a.thresholds_db.back();
    } else {
      std::size_t k = 0;
      while (k + 1 < af.size() && af[k + 1] < f) ++k;
      const double lf = std::log(f), l0 = std::log(af[k]), l1 = std::log(af[k + 1]);
      const double w = (lf - l0) / (l1 - l0);
      out[i] = (1.0 - w) * a.thresholds_db[k] + w * a.thresholds_db[k + 1];
    }
  }
  return out;
}

std::vector<double> audiogram_feature(const Audiogram& a) {
  std::vector<double> out(kNumAudiometricFreqs);
  for (int i = 0; i < kNumAudiometricFreqs; ++i)
    out[i] = a.thresholds_db[i] / 100.0;
  return out;
}

}  // namespace maskaid
