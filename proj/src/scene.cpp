// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/scene.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "maskaid/errors.hpp"
#include "maskaid/fftutil.hpp"
#include "maskaid/wavio.hpp"

namespace maskaid {

namespace fs = std::filesystem;
using nlohmann::json;

void SceneSpec::validate(double wall_margin) const {
  if (!(room.x > 0 && room.y > 0 && room.z > 0))
    throw ValidationError("scene spec: non-positive room dimensions");
  if (!(t60 > 0)) throw ValidationError("scene spec: t60 must be positive");
  if (duration_s <= 0) throw ValidationError("scene spec: bad duration");
  if (noise_pos.size() != noise_rel_db.size() ||
      (noise_index.size() != 0 && noise_index.size() != noise_pos.size()))
    throw ValidationError("scene spec: inconsistent noise source lists");
  if (noise_pos.empty()) throw ValidationError("scene spec: no noise sources");
  auto check = [&](const Vec3& p, const char* what) {
    if (p.x < wall_margin || p.x > room.x - wall_margin || p.y < wall_margin ||
        p.y > room.y - wall_margin || p.z < wall_margin ||
        p.z > room.z - wall_margin)
      throw ValidationError(std::string("scene spec: ") + what +
                            " violates the wall margin");
  };
  check(speech_pos, "speech source");
  check(receiver_pos, "receiver");
  for (const auto& p : noise_pos) check(p, "noise source");
}

SceneSpec SceneSpec::sample(Rng& rng, const SceneRanges& r, int num_speech_entries,
                            int num_noise_entries) {
  if (num_speech_entries < 1 || num_noise_entries < 1)
    throw ValidationError("scene sampling requires speech and noise material");
  SceneSpec s;
  s.room = {rng.uniform(r.room_min.x, r.room_max.x),
            rng.uniform(r.room_min.y, r.room_max.y),
            rng.uniform(r.room_min.z, r.room_max.z)};
  s.t60 = rng.uniform(r.t60_min, r.t60_max);
  auto place = [&]() {
    return Vec3{rng.uniform(r.wall_margin, s.room.x - r.wall_margin),
                rng.uniform(r.wall_margin, s.room.y - r.wall_margin),
                rng.uniform(r.wall_margin, s.room.z - r.wall_margin)};
  };
  s.speech_pos = place();
  s.receiver_pos = place();
  // Keep source and receiver from coinciding.
  while (distance(s.speech_pos, s.receiver_pos) < 0.2) s.receiver_pos = place();
  const int nn = rng.uniform_int(r.noise_count_min, r.noise_count_max);
  for (int i = 0; i < nn; ++i) {
    s.noise_pos.push_back(place());
    s.noise_rel_db.push_back(
        rng.uniform(-r.noise_rel_db_range / 2.0, r.noise_rel_db_range / 2.0));
    s.noise_index.push_back(rng.uniform_int(0, num_noise_entries - 1));
  }
  s.snr_db = rng.uniform(r.snr_min_db, r.snr_max_db);
  s.level_db_spl = rng.uniform(r.level_min_db_spl, r.level_max_db_spl);
  s.max_order = r.max_order;
  s.duration_s = r.duration_s;
  s.speech_index = rng.uniform_int(0, num_speech_entries - 1);
  s.validate(r.wall_margin);
  return s;
}

namespace {

std::vector<double> convolve_trunc(const std::vector<double>& sig,
                                   const std::vector<double>& rir, std::size_t len) {
  std::vector<double> full = fftutil::convolve_full(sig, rir);
  full.resize(len, 0.0);
  return full;
}

}  // namespace

Scene make_scene(const SceneSpec& spec, const AudioSignal& speech,
                 const std::vector<AudioSignal>& noises) {
  spec.validate();
  const std::size_t len = static_cast<std::size_t>(spec.duration_s * kSampleRate);
  if (speech.samples.size() < len)
    throw ValidationError("make_scene: speech material shorter than the scene");
  if (noises.size() != spec.noise_pos.size())
    throw ValidationError("make_scene: noise count does not match the spec");
  for (const auto& n : noises)
    if (n.samples.size() < len)
      throw ValidationError("make_scene: noise material shorter than the scene");

  std::vector<double> dry_speech(speech.samples.begin(), speech.samples.begin() + len);

  const std::vector<double> rir_speech =
      simulate_rir({spec.room, spec.t60}, spec.speech_pos, spec.receiver_pos,
                   spec.max_order);
  const auto [rir_early, rir_late] = split_early_late(rir_speech);

  std::vector<double> rev_speech = convolve_trunc(dry_speech, rir_speech, len);
  std::vector<double> y_early = convolve_trunc(dry_speech, rir_early, len);

  std::vector<std::vector<double>> rev_noises(noises.size());
  std::vector<double> noise_sum(len, 0.0);
  for (std::size_t i = 0; i < noises.size(); ++i) {
    const std::vector<double> rir_n =
        simulate_rir({spec.room, spec.t60}, spec.noise_pos[i], spec.receiver_pos,
                     spec.max_order);
    std::vector<double> dry(noises[i].samples.begin(), noises[i].samples.begin() + len);
    rev_noises[i] = convolve_trunc(dry, rir_n, len);
    const double g = std::pow(10.0, spec.noise_rel_db[i] / 20.0);
    for (std::size_t j = 0; j < len; ++j) {
      rev_noises[i][j] *= g;
      noise_sum[j] += rev_noises[i][j];
    }
  }

  const double rms_s = rms(rev_speech);
  const double rms_n = rms(noise_sum);
  if (rms_s == 0.0) throw ValidationError("make_scene: silent reverberant speech");
  if (rms_n == 0.0) throw ValidationError("make_scene: silent reverberant noise");
  // Scale the noise sum so the speech/noise ratio equals the requested SNR.
  const double g_snr = rms_s / (rms_n * std::pow(10.0, spec.snr_db / 20.0));
  for (std::size_t j = 0; j < len; ++j) noise_sum[j] *= g_snr;
  for (auto& rn : rev_noises)
    for (double& v : rn) v *= g_snr;

  std::vector<double> mix(len);
  for (std::size_t j = 0; j < len; ++j) mix[j] = rev_speech[j] + noise_sum[j];
  const double g_mix = scale_factor_for_level(mix, spec.level_db_spl);

  Scene scene;
  scene.spec = spec;
  scene.x.samples.resize(len);
  scene.y.samples.resize(len);
  scene.speech_stem.samples.resize(len);
  for (std::size_t j = 0; j < len; ++j) {
    scene.x.samples[j] = mix[j] * g_mix;
    scene.y.samples[j] = y_early[j] * g_mix;
    scene.speech_stem.samples[j] = rev_speech[j] * g_mix;
  }
  scene.noise_stems.resize(noises.size());
  for (std::size_t i = 0; i < noises.size(); ++i) {
    scene.noise_stems[i].samples.resize(len);
    for (std::size_t j = 0; j < len; ++j)
      scene.noise_stems[i].samples[j] = rev_noises[i][j] * g_mix;
  }

  std::vector<double> noise_final(len);
  for (std::size_t j = 0; j < len; ++j)
    noise_final[j] = noise_sum[j] * g_mix;
  scene.measured_snr_db =
      20.0 * std::log10(rms(scene.speech_stem.samples) / rms(noise_final));
  scene.measured_level_db_spl = level_db_spl(scene.x);

  if (std::fabs(scene.measured_snr_db - spec.snr_db) > 0.01)
    throw Error("make_scene: SNR constraint violated");
  if (std::fabs(scene.measured_level_db_spl - spec.level_db_spl) > 0.01)
    throw Error("make_scene: level constraint violated");
  return scene;
}

// ---- manifest -----------------------------------------------------------------

SceneManifest SceneManifest::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifest: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw FormatError("malformed manifest " + path + ": " + e.what());
  }
  SceneManifest m;
  auto parse = [&](const char* key, std::vector<ManifestEntry>& out) {
    if (!j.contains(key)) throw FormatError("manifest missing '" + std::string(key) + "': " + path);
    for (const auto& e : j.at(key)) {
      ManifestEntry me;
      me.path = e.at("path").get<std::string>();
      me.offset_s = e.value("offset_s", 0.0);
      out.push_back(me);
    }
  };
  parse("speech", m.speech);
  parse("noise", m.noise);
  if (m.speech.empty() || m.noise.empty())
    throw ValidationError("manifest must list speech and noise material: " + path);
  return m;
}

void SceneManifest::save(const std::string& path) const {
  json j;
  j["speech"] = json::array();
  j["noise"] = json::array();
  for (const auto& e : speech)
    j["speech"].push_back({{"path", e.path}, {"offset_s", e.offset_s}});
  for (const auto& e : noise)
    j["noise"].push_back({{"path", e.path}, {"offset_s", e.offset_s}});
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write manifest: " + path);
  f << j.dump(2) << "\n";
}

AudioSignal load_segment(const ManifestEntry& e, double duration_s) {
  AudioSignal full = wav_read(e.path);
  const std::size_t off = static_cast<std::size_t>(e.offset_s * kSampleRate);
  const std::size_t len = static_cast<std::size_t>(duration_s * kSampleRate);
  if (off + len > full.samples.size())
    throw ValidationError("manifest entry too short for the scene: " + e.path);
  AudioSignal out;
  out.samples.assign(full.samples.begin() + off, full.samples.begin() + off + len);
  return out;
}

// ---- bundles ------------------------------------------------------------------

namespace {

json vec3_json(const Vec3& v) { return {{"x", v.x}, {"y", v.y}, {"z", v.z}}; }

}  // namespace

void write_scene_bundle(const std::string& dir, const Scene& scene) {
  fs::create_directories(dir + "/stems");
  wav_write(dir + "/x.wav", scene.x);
  wav_write(dir + "/y.wav", scene.y);
  wav_write(dir + "/stems/speech.wav", scene.speech_stem);
  for (std::size_t i = 0; i < scene.noise_stems.size(); ++i)
    wav_write(dir + "/stems/noise" + std::to_string(i) + ".wav",
              scene.noise_stems[i]);

  const SceneSpec& s = scene.spec;
  json j;
  j["room"] = vec3_json(s.room);
  j["t60"] = s.t60;
  j["speech_pos"] = vec3_json(s.speech_pos);
  j["receiver_pos"] = vec3_json(s.receiver_pos);
  j["noise_pos"] = json::array();
  for (const auto& p : s.noise_pos) j["noise_pos"].push_back(vec3_json(p));
  j["noise_rel_db"] = s.noise_rel_db;
  j["snr_db"] = s.snr_db;
  j["level_db_spl"] = s.level_db_spl;
  j["max_order"] = s.max_order;
  j["duration_s"] = s.duration_s;
  j["seed"] = s.seed;
  j["speech_index"] = s.speech_index;
  j["noise_index"] = s.noise_index;
  j["measured_snr_db"] = scene.measured_snr_db;
  j["measured_level_db_spl"] = scene.measured_level_db_spl;
  std::ofstream f(dir + "/scene.json", std::ios::trunc);
  if (!f) throw IoError("cannot write scene record in " + dir);
  f << j.dump(2) << "\n";
}

SceneAudio load_scene_audio(const std::string& dir) {
  SceneAudio sa;
  sa.dir = dir;
  sa.x = wav_read(dir + "/x.wav");
  sa.y = wav_read(dir + "/y.wav");
  return sa;
}

std::vector<std::string> list_scene_dirs(const std::string& root) {
  if (!fs::is_directory(root)) throw IoError("not a directory: " + root);
  std::vector<std::string> dirs;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory() && e.path().filename().string().rfind("scene_", 0) == 0)
      dirs.push_back(e.path().string());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

// ---- audiogram sampling ----------------------------------------------------------

Audiogram AudiogramSampler::sample(Rng& rng) const {
  const auto& profiles = standard_audiograms();
  const int pick = rng.uniform_int(0, static_cast<int>(profiles.size()) - 1);
  return sample_from(profiles[pick].audiogram, rng);
}

Audiogram AudiogramSampler::sample_from(const Audiogram& base, Rng& rng) const {
  Audiogram a = base;
  for (double& t : a.thresholds_db) {
    if (jitter_db > 0.0) t += rng.uniform(-jitter_db, jitter_db);
    t = std::clamp(t, 0.0, 105.0);
  }
  return a;
}

}  // namespace maskaid
