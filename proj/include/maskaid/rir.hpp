// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#pragma once

#include <utility>
#include <vector>

#include "maskaid/signal.hpp"

namespace maskaid {

inline constexpr double kSpeedOfSound = 343.0;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

struct RoomSpec {
  Vec3 dims;    // meters
  double t60 = 0.3;  // seconds
};

// Deterministic shoebox image-source method. Wall absorption is frequency
// independent and derived from T60 via Sabine's relation; image amplitudes
// are beta^bounces / distance with delays rounded to the nearest sample.
// max_order caps the total number of wall reflections (0 = direct path only).
std::vector<double> simulate_rir(const RoomSpec& room, const Vec3& source,
                                 const Vec3& receiver, int max_order,
                                 double fs = kSampleRate);

// Splits at the global-peak (direct path) index plus the boundary. Both parts
// have the input length and sum to the input exactly.
std::pair<std::vector<double>, std::vector<double>> split_early_late(
    const std::vector<double>& rir, double fs = kSampleRate,
    double boundary_s = 0.05);

}  // namespace maskaid
