// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/models.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "maskaid/errors.hpp"
#include "maskaid/rng.hpp"

namespace maskaid {

namespace {

constexpr char kMagic[8] = {'M', 'K', 'P', 'A', 'R', 'A', 'M', '1'};
constexpr uint32_t kVersion = 1;

ad::Tensor column_constant(const std::vector<double>& v) {
  return ad::constant({static_cast<int64_t>(v.size()), 1}, v);
}

}  // namespace

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::gainbank: return "gainbank";
    case ModelKind::tinynet: return "tinynet";
  }
  throw StateError("unknown model kind");
}

ModelKind model_kind_from_name(const std::string& s) {
  if (s == "gainbank") return ModelKind::gainbank;
  if (s == "tinynet") return ModelKind::tinynet;
  throw ValidationError("unknown model kind: " + s);
}

ad::Tensor logmag_feature(const Spectrogram& x) {
  std::vector<double> feat(x.re.size());
  for (std::size_t i = 0; i < feat.size(); ++i)
    feat[i] = std::log10(std::hypot(x.re[i], x.im[i]) + 1e-8);
  return ad::constant({x.bins, x.frames}, std::move(feat));
}

Compensator::Compensator(const ModelConfig& cfg) : cfg_(cfg) {
  if (cfg_.bins <= 0 || cfg_.hidden <= 0)
    throw ValidationError("model config: bins and hidden must be positive");
  init_params();
}

void Compensator::add_param(const std::string& name, ad::Shape shape,
                            std::vector<double> v) {
  tape_.parameter(std::move(shape), std::move(v));
  names_.push_back(name);
}

void Compensator::init_params() {
  const int64_t f = cfg_.bins;
  Rng rng(cfg_.init_seed);
  auto zeros_vec = [](int64_t n) { return std::vector<double>(n, 0.0); };

  if (cfg_.kind == ModelKind::gainbank) {
    add_param("nr.w0", {f, 1}, zeros_vec(f));
    add_param("nr.w1", {f, 1}, zeros_vec(f));
    add_param("hlc.g0", {f, 1}, zeros_vec(f));
    add_param("hlc.cg", {f, kNumAudiometricFreqs}, zeros_vec(f * kNumAudiometricFreqs));
    if (cfg_.domain == MaskDomain::complex_valued) {
      add_param("hlc.p0", {f, 1}, zeros_vec(f));
      add_param("hlc.cp", {f, kNumAudiometricFreqs}, zeros_vec(f * kNumAudiometricFreqs));
    }
  } else {
    const int64_t h = cfg_.hidden;
    const int64_t k = (cfg_.domain == MaskDomain::complex_valued) ? 4 * f : 2 * f;
    auto uniform_vec = [&](int64_t n, double s) {
      std::vector<double> v(n);
      for (auto& x : v) x = rng.uniform(-s, s);
      return v;
    };
    add_param("w1", {h, f}, uniform_vec(h * f, 1.0 / std::sqrt(static_cast<double>(f))));
    add_param("b1", {h, 1}, zeros_vec(h));
    add_param("film_g", {h, kNumAudiometricFreqs}, zeros_vec(h * kNumAudiometricFreqs));
    add_param("film_b", {h, kNumAudiometricFreqs}, zeros_vec(h * kNumAudiometricFreqs));
    add_param("w2", {h, h}, uniform_vec(h * h, 1.0 / std::sqrt(static_cast<double>(h))));
    add_param("b2", {h, 1}, zeros_vec(h));
    add_param("wout", {k, h}, zeros_vec(k * h));  // resting point contract
    add_param("bout", {k, 1}, zeros_vec(k));
  }
  if (cfg_.multitask) {
    add_param("u_nr", {1}, {0.0});
    add_param("u_hlc", {1}, {0.0});
  }
}

ad::Tensor Compensator::param(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return tape_.parameters()[i];
  throw StateError("model has no parameter named " + name);
}

ad::Tensor Compensator::u_nr() const {
  if (!cfg_.multitask) throw StateError("u_nr: model is not multitask");
  return param("u_nr");
}

ad::Tensor Compensator::u_hlc() const {
  if (!cfg_.multitask) throw StateError("u_hlc: model is not multitask");
  return param("u_hlc");
}

MaskForward Compensator::forward(const Spectrogram& x,
                                 const Audiogram& audiogram) const {
  if (x.bins != cfg_.bins)
    throw ShapeError("forward: spectrogram bin count does not match model");
  const ad::Shape full{x.bins, x.frames};
  const ad::Tensor feat = logmag_feature(x);
  const ad::Tensor afeat = column_constant(audiogram_feature(audiogram));

  MaskForward out;
  out.domain = cfg_.domain;

  if (cfg_.kind == ModelKind::gainbank) {
    ad::Tensor s = ad::add(param("nr.w0"), ad::mul(param("nr.w1"), feat));
    ad::Tensor nr_mag = ad::sigmoid(s);  // (F, T)
    ad::Tensor g = ad::add(param("hlc.g0"), ad::matmul(param("hlc.cg"), afeat));
    ad::Tensor hlc_mag = ad::exp(g);  // (F, 1)
    if (cfg_.domain == MaskDomain::real_valued) {
      out.nr_re = nr_mag;
      out.hlc_re = ad::broadcast_to(hlc_mag, full);
    } else {
      ad::Tensor ph = ad::add(param("hlc.p0"), ad::matmul(param("hlc.cp"), afeat));
      out.nr_re = nr_mag;
      out.nr_im = ad::broadcast_to(ad::constant({1}, {0.0}), full);
      out.hlc_re = ad::broadcast_to(ad::mul(hlc_mag, ad::cos(ph)), full);
      out.hlc_im = ad::broadcast_to(ad::mul(hlc_mag, ad::sin(ph)), full);
    }
    return out;
  }

  // tinynet
  const int64_t f = cfg_.bins;
  ad::Tensor gamma = ad::matmul(param("film_g"), afeat);  // (h, 1)
  ad::Tensor beta = ad::matmul(param("film_b"), afeat);
  ad::Tensor pre1 = ad::add(ad::matmul(param("w1"), feat), param("b1"));
  ad::Tensor h1 = ad::tanh(ad::add(ad::mul(pre1, ad::add_scalar(gamma, 1.0)), beta));
  ad::Tensor h2 = ad::tanh(ad::add(ad::matmul(param("w2"), h1), param("b2")));
  ad::Tensor o = ad::add(ad::matmul(param("wout"), h2), param("bout"));  // (K, T)

  ad::Tensor nr_logit = ad::slice_rows(o, 0, f);
  ad::Tensor nr_mag = ad::sigmoid(nr_logit);
  if (cfg_.domain == MaskDomain::real_valued) {
    out.nr_re = nr_mag;
    out.hlc_re = ad::exp(ad::slice_rows(o, f, 2 * f));
  } else {
    ad::Tensor nr_ph = ad::slice_rows(o, f, 2 * f);
    ad::Tensor hlc_mag = ad::exp(ad::slice_rows(o, 2 * f, 3 * f));
    ad::Tensor hlc_ph = ad::slice_rows(o, 3 * f, 4 * f);
    out.nr_re = ad::mul(nr_mag, ad::cos(nr_ph));
    out.nr_im = ad::mul(nr_mag, ad::sin(nr_ph));
    out.hlc_re = ad::mul(hlc_mag, ad::cos(hlc_ph));
    out.hlc_im = ad::mul(hlc_mag, ad::sin(hlc_ph));
  }
  return out;
}

MaskPair Compensator::forward_masks(const Spectrogram& x,
                                    const Audiogram& audiogram) const {
  MaskForward fw = forward(x, audiogram);
  MaskPair pair;
  pair.domain = cfg_.domain;
  pair.nr = Spectrogram::zeros(x.bins, x.frames, x.geometry);
  pair.hlc = Spectrogram::zeros(x.bins, x.frames, x.geometry);
  pair.nr.re = fw.nr_re.values();
  pair.hlc.re = fw.hlc_re.values();
  if (cfg_.domain == MaskDomain::complex_valued) {
    pair.nr.im = fw.nr_im.values();
    pair.hlc.im = fw.hlc_im.values();
  }
  return pair;
}

void Compensator::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("save: cannot open " + path);
  f.write(kMagic, 8);
  auto w32 = [&](uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
  auto w8 = [&](uint8_t v) { f.write(reinterpret_cast<const char*>(&v), 1); };
  auto w64 = [&](uint64_t v) { f.write(reinterpret_cast<const char*>(&v), 8); };
  w32(kVersion);
  w8(static_cast<uint8_t>(cfg_.kind));
  w8(cfg_.domain == MaskDomain::complex_valued ? 1 : 0);
  w32(static_cast<uint32_t>(cfg_.bins));
  w32(static_cast<uint32_t>(cfg_.hidden));
  w8(cfg_.multitask ? 1 : 0);
  w64(cfg_.init_seed);
  w32(static_cast<uint32_t>(names_.size()));
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const std::string& name = names_[i];
    const ad::Tensor& t = tape_.parameters()[i];
    const uint16_t len = static_cast<uint16_t>(name.size());
    f.write(reinterpret_cast<const char*>(&len), 2);
    f.write(name.data(), len);
    w8(static_cast<uint8_t>(t.rank()));
    for (int64_t d : t.shape()) f.write(reinterpret_cast<const char*>(&d), 8);
    f.write(reinterpret_cast<const char*>(t.values().data()),
            static_cast<std::streamsize>(t.values().size() * sizeof(double)));
  }
  if (!f) throw IoError("save: write failed for " + path);
}

Compensator Compensator::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("load: cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kMagic, 8) != 0)
    throw FormatError("load: bad magic in " + path);
  auto r32 = [&]() { uint32_t v; f.read(reinterpret_cast<char*>(&v), 4); return v; };
  auto r8 = [&]() { uint8_t v; f.read(reinterpret_cast<char*>(&v), 1); return v; };
  auto r64 = [&]() { uint64_t v; f.read(reinterpret_cast<char*>(&v), 8); return v; };
  const uint32_t version = r32();
  if (version != kVersion)
    throw FormatError("load: unsupported version in " + path);
  ModelConfig cfg;
  const uint8_t kind = r8();
  if (kind > 1) throw FormatError("load: unknown model kind in " + path);
  cfg.kind = static_cast<ModelKind>(kind);
  cfg.domain = r8() ? MaskDomain::complex_valued : MaskDomain::real_valued;
  cfg.bins = static_cast<int>(r32());
  cfg.hidden = static_cast<int>(r32());
  cfg.multitask = r8() != 0;
  cfg.init_seed = r64();
  if (!f) throw FormatError("load: truncated header in " + path);

  Compensator model(cfg);
  const uint32_t count = r32();
  if (count != model.names_.size())
    throw FormatError("load: parameter count mismatch in " + path);
  for (uint32_t i = 0; i < count; ++i) {
    uint16_t len = 0;
    f.read(reinterpret_cast<char*>(&len), 2);
    std::string name(len, '\0');
    f.read(name.data(), len);
    if (name != model.names_[i])
      throw FormatError("load: parameter name mismatch at entry " +
                        std::to_string(i) + " in " + path);
    const uint8_t rank = r8();
    ad::Shape shape(rank);
    for (auto& d : shape) f.read(reinterpret_cast<char*>(&d), 8);
    ad::Tensor t = model.tape_.parameters()[i];
    if (shape != t.shape())
      throw FormatError("load: shape manifest mismatch for " + name + " in " + path);
    std::vector<double> vals(static_cast<std::size_t>(ad::numel_of(shape)));
    f.read(reinterpret_cast<char*>(vals.data()),
           static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!f) throw FormatError("load: truncated data in " + path);
    t.leaf_assign(vals);
  }
  return model;
}

}  // namespace maskaid
