// Copyright 2026 The maskaid authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
#include "maskaid/rir.hpp"

#include <algorithm>
#include <cmath>

#include "maskaid/errors.hpp"

namespace maskaid {

double distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

namespace {

struct AxisImage {
  double coord;
  int bounces;
};

// 1-D image coordinates 2*m*L +/- s with their wall-bounce counts.
std::vector<AxisImage> axis_images(double s, double l, int max_order) {
  std::vector<AxisImage> out;
  const int mmax = max_order / 2 + 1;
  for (int m = -mmax; m <= mmax; ++m) {
    const int b_pos = 2 * std::abs(m);
    if (b_pos <= max_order) out.push_back({2.0 * m * l + s, b_pos});
    const int b_neg = std::abs(2 * m - 1);
    if (b_neg <= max_order) out.push_back({2.0 * m * l - s, b_neg});
  }
  return out;
}

void check_inside(const Vec3& p, const Vec3& dims, const char* what) {
  if (!(p.x > 0 && p.x < dims.x && p.y > 0 && p.y < dims.y && p.z > 0 &&
        p.z < dims.z))
    throw ValidationError(std::string("simulate_rir: ") + what +
                          " position outside room");
}

}  // namespace

std::vector<double> simulate_rir(const RoomSpec& room, const Vec3& source,
                                 const Vec3& receiver, int max_order, double fs) {
  if (!(room.dims.x > 0 && room.dims.y > 0 && room.dims.z > 0))
    throw ValidationError("simulate_rir: non-positive room dimensions");
  if (!(room.t60 > 0)) throw ValidationError("simulate_rir: t60 must be positive");
  if (max_order < 0) throw ValidationError("simulate_rir: negative max_order");
  check_inside(source, room.dims, "source");
  check_inside(receiver, room.dims, "receiver");
  if (distance(source, receiver) < 1e-6)
    throw ValidationError("simulate_rir: source and receiver coincide");

  // Frequency-independent absorption from Sabine's relation.
  const double volume = room.dims.x * room.dims.y * room.dims.z;
  const double surface = 2.0 * (room.dims.x * room.dims.y +
                                room.dims.x * room.dims.z +
                                room.dims.y * room.dims.z);
  double alpha = 0.161 * volume / (surface * room.t60);
  alpha = std::min(alpha, 0.9999);
  const double beta = std::sqrt(1.0 - alpha);

  const auto ix = axis_images(source.x, room.dims.x, max_order);
  const auto iy = axis_images(source.y, room.dims.y, max_order);
  const auto iz = axis_images(source.z, room.dims.z, max_order);

  struct Tap {
    std::size_t index;
    double amp;
  };
  std::vector<Tap> taps;
  std::size_t max_index = 0;
  for (const auto& ax : ix) {
    for (const auto& ay : iy) {
      const int bxy = ax.bounces + ay.bounces;
      if (bxy > max_order) continue;
      for (const auto& az : iz) {
        const int b = bxy + az.bounces;
        if (b > max_order) continue;
        const Vec3 img{ax.coord, ay.coord, az.coord};
        const double d = distance(img, receiver);
        const double delay = d / kSpeedOfSound * fs;
        const std::size_t n = static_cast<std::size_t>(std::llround(delay));
        const double amp = std::pow(beta, b) / std::max(d, 1e-3);
        taps.push_back({n, amp});
        max_index = std::max(max_index, n);
      }
    }
  }

  std::vector<double> rir(max_index + 1, 0.0);
  for (const auto& t : taps) rir[t.index] += t.amp;
  return rir;
}

std::pair<std::vector<double>, std::vector<double>> split_early_late(
    const std::vector<double>& rir, double fs, double boundary_s) {
  if (rir.empty()) throw ValidationError("split_early_late: empty RIR");
  std::size_t peak = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < rir.size(); ++i) {
    const double m = std::fabs(rir[i]);
    if (m > best) {
      best = m;
      peak = i;
    }
  }
  if (best == 0.0) throw ValidationError("split_early_late: silent RIR");

  const std::size_t boundary =
      peak + static_cast<std::size_t>(std::llround(boundary_s * fs));
  std::vector<double> early(rir.size(), 0.0), late(rir.size(), 0.0);
  for (std::size_t i = 0; i < rir.size(); ++i) {
    if (i <= boundary)
      early[i] = rir[i];
    else
      late[i] = rir[i];
  }
  return {early, late};
}

}  // namespace maskaid
