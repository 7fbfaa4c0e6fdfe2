// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace maskaid {

// Seeded RNG with platform-independent value derivation. std::mt19937_64
// provides the raw stream; the double mappings below are fixed here rather
// than delegated to std::uniform_real_distribution so that identical seeds
// give bit-identical samples on every standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed), seed_mix_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_unit() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Inclusive integer range.
  int uniform_int(int lo, int hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(eng_() % span);
  }

  // Standard normal via Box-Muller (deterministic, no cached spare).
  double normal() {
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Derive an independent stream for sub-task `stream` (scene index, channel
  // index, ...) without disturbing this generator's state.
  Rng fork(uint64_t stream) const {
    uint64_t z = seed_mix_ + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 eng_;
  uint64_t seed_mix_;
};

}  // namespace maskaid
