// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maskaid/audiogram.hpp"
#include "maskaid/rir.hpp"
#include "maskaid/rng.hpp"
#include "maskaid/signal.hpp"

namespace maskaid {

// Sampling ranges for acoustic scenes.
struct SceneRanges {
  Vec3 room_min{3.0, 3.0, 2.5};
  Vec3 room_max{10.0, 10.0, 4.0};
  double t60_min = 0.1, t60_max = 0.7;
  int noise_count_min = 1, noise_count_max = 3;
  double noise_rel_db_range = 10.0;  // per-source offset within a 10 dB range
  double snr_min_db = -5.0, snr_max_db = 15.0;
  double level_min_db_spl = 65.0, level_max_db_spl = 85.0;
  int max_order = 6;
  double duration_s = 4.0;
  double wall_margin = 0.1;
};

struct SceneSpec {
  Vec3 room;
  double t60 = 0.3;
  Vec3 speech_pos, receiver_pos;
  std::vector<Vec3> noise_pos;
  std::vector<double> noise_rel_db;
  double snr_db = 0.0;
  double level_db_spl = 75.0;
  int max_order = 6;
  double duration_s = 4.0;
  uint64_t seed = 0;
  int speech_index = 0;            // manifest entry choices
  std::vector<int> noise_index;

  void validate(double wall_margin = 0.1) const;
  static SceneSpec sample(Rng& rng, const SceneRanges& r, int num_speech_entries,
                          int num_noise_entries);
};

struct Scene {
  AudioSignal x;  // noisy reverberant mixture
  AudioSignal y;  // early-reflection target, same final scale as the speech stem
  AudioSignal speech_stem;
  std::vector<AudioSignal> noise_stems;
  SceneSpec spec;
  double measured_snr_db = 0.0;
  double measured_level_db_spl = 0.0;
};

// Convolves, balances noise sources, enforces the SNR between reverberant
// speech and the summed reverberant noise, and scales the mixture to the
// target level. SNR and level are asserted to 0.01 dB at construction.
Scene make_scene(const SceneSpec& spec, const AudioSignal& speech,
                 const std::vector<AudioSignal>& noises);

// ---- material manifest ------------------------------------------------------

struct ManifestEntry {
  std::string path;
  double offset_s = 0.0;
};

struct SceneManifest {
  std::vector<ManifestEntry> speech;
  std::vector<ManifestEntry> noise;
  static SceneManifest load(const std::string& path);
  void save(const std::string& path) const;
};

// Reads the manifest entry and cuts duration_s seconds at its offset.
AudioSignal load_segment(const ManifestEntry& e, double duration_s);

// ---- scene bundles ----------------------------------------------------------

void write_scene_bundle(const std::string& dir, const Scene& scene);

struct SceneAudio {
  AudioSignal x, y;
  std::string dir;
};
SceneAudio load_scene_audio(const std::string& dir);

// Directory names scene_00000, scene_00001, ... under a root.
std::vector<std::string> list_scene_dirs(const std::string& root);

// ---- audiogram sampling -------------------------------------------------------

struct AudiogramSampler {
  double jitter_db = 10.0;  // i.i.d. uniform in [-jitter_db, jitter_db]

  // Uniform profile choice among the 11 standard audiograms, jitter per
  // threshold, clamp to [0, 105] dB.
  Audiogram sample(Rng& rng) const;
  // Jittered draw from a fixed base profile.
  Audiogram sample_from(const Audiogram& base, Rng& rng) const;
};

}  // namespace maskaid
