// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Desk-scale trainable mask predictors. Both models share the contract:
// noisy STFT plus normalized audiogram in, an (NR, HLC) mask pair out.
//
//   gainbank -- M_HLC is a time-invariant per-bin (complex) gain from a bias
//               vector plus an affine map of the audiogram features; M_NR is
//               a per-unit sigmoid gain over a per-bin affine map of the
//               log-magnitude feature.
//   tinynet  -- frame-wise two-hidden-layer MLP on the log-magnitude feature
//               with multiplicative-plus-additive audiogram conditioning on
//               the first hidden layer; zero-initialized output layer.
//
// Identity-friendly initialization: untrained models emit M_HLC = 1 and
// M_NR = sigmoid(0) = 0.5.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maskaid/audiogram.hpp"
#include "maskaid/maskops.hpp"
#include "maskaid/stft.hpp"
#include "maskaid/tensor.hpp"

namespace maskaid {

enum class ModelKind : uint8_t { gainbank = 0, tinynet = 1 };

std::string model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& s);

struct ModelConfig {
  ModelKind kind = ModelKind::gainbank;
  MaskDomain domain = MaskDomain::real_valued;
  int bins = 257;
  int hidden = 48;        // tinynet hidden width
  bool multitask = false; // adds the uncertainty parameters u_NR, u_HLC
  uint64_t init_seed = 0;
};

// Mask pair as tape tensors, each of shape (bins, frames). Imaginary parts
// are undefined tensors in the real-valued domain.
struct MaskForward {
  ad::Tensor nr_re, nr_im;
  ad::Tensor hlc_re, hlc_im;
  MaskDomain domain = MaskDomain::real_valued;
};

class Compensator {
 public:
  explicit Compensator(const ModelConfig& cfg);

  const ModelConfig& config() const { return cfg_; }
  ad::Tape& tape() { return tape_; }
  const std::vector<ad::Tensor>& parameters() const { return tape_.parameters(); }
  ad::Tensor param(const std::string& name) const;  // throws StateError if absent
  const std::vector<std::string>& param_names() const { return names_; }

  ad::Tensor u_nr() const;   // multitask only
  ad::Tensor u_hlc() const;

  MaskForward forward(const Spectrogram& x, const Audiogram& audiogram) const;
  MaskPair forward_masks(const Spectrogram& x, const Audiogram& audiogram) const;

  void save(const std::string& path) const;
  static Compensator load(const std::string& path);

 private:
  void add_param(const std::string& name, ad::Shape shape, std::vector<double> v);
  void init_params();

  ModelConfig cfg_;
  ad::Tape tape_;
  std::vector<std::string> names_;
};

// Shared input feature: log10(|X| + 1e-8) as a constant (bins, frames) tensor.
ad::Tensor logmag_feature(const Spectrogram& x);

}  // namespace maskaid
