// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/optim.hpp"

#include <cmath>

#include "maskaid/errors.hpp"

namespace maskaid {

Adam::Adam(const AdamConfig& cfg, std::vector<ad::Tensor> params)
    : cfg_(cfg), params_(std::move(params)) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.emplace_back(p.numel(), 0.0);
    v_.emplace_back(p.numel(), 0.0);
  }
}

double clip_global_norm(std::vector<std::vector<double>>& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& g : grads)
    for (double v : g) sq += v * v;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (auto& g : grads)
      for (double& v : g) v *= scale;
  }
  return norm;
}

void Adam::step(const std::vector<std::vector<double>>& grads) {
  if (grads.size() != params_.size())
    throw ShapeError("Adam::step: gradient count mismatch");
  std::vector<std::vector<double>> g = grads;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i].size() != static_cast<std::size_t>(params_[i].numel()))
      throw ShapeError("Adam::step: gradient size mismatch at parameter " +
                       std::to_string(i));
    for (double v : g[i])
      if (!std::isfinite(v))
        throw TrainingError("Adam::step: non-finite gradient encountered; "
                            "training aborted");
  }
  clip_global_norm(g, cfg_.clip_norm);

  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    std::vector<double> w = params_[i].values();
    for (std::size_t j = 0; j < w.size(); ++j) {
      m_[i][j] = cfg_.beta1 * m_[i][j] + (1.0 - cfg_.beta1) * g[i][j];
      v_[i][j] = cfg_.beta2 * v_[i][j] + (1.0 - cfg_.beta2) * g[i][j] * g[i][j];
      const double mhat = m_[i][j] / bc1;
      const double vhat = v_[i][j] / bc2;
      w[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
    params_[i].leaf_assign(w);
  }
}

void Adam::step_from_leaf_grads() {
  std::vector<std::vector<double>> g;
  g.reserve(params_.size());
  for (auto& p : params_) {
    if (p.has_grad())
      g.push_back(p.grad());
    else
      g.emplace_back(p.numel(), 0.0);
  }
  step(g);
  for (auto& p : params_) p.zero_grad();
}

}  // namespace maskaid
