// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <vector>

#include "maskaid/tensor.hpp"

namespace maskaid {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 5.0;  // global L2 clip applied before the moment update
};

class Adam {
 public:
  Adam(const AdamConfig& cfg, std::vector<ad::Tensor> params);

  // One update from explicit per-parameter gradients (batch-reduced).
  // Throws TrainingError on non-finite gradients.
  void step(const std::vector<std::vector<double>>& grads);
  // Convenience: read gradients from the leaf buffers, step, zero them.
  void step_from_leaf_grads();

  void set_lr(double lr) { cfg_.lr = lr; }
  double lr() const { return cfg_.lr; }
  long step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::vector<ad::Tensor> params_;
  std::vector<std::vector<double>> m_, v_;
  long t_ = 0;
};

// Scales the gradient set to the given global L2 norm cap. Returns the
// pre-clip norm.
double clip_global_norm(std::vector<std::vector<double>>& grads, double max_norm);

}  // namespace maskaid
