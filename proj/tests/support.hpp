#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "declump/declump.hpp"

namespace declump::test {

inline std::vector<Vec2> circle_polygon(Vec2 c, double r, int n) {
  std::vector<Vec2> out;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    out.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
  }
  return out;
}

/// Union outline of two disks of radius r whose centers are d apart on the
/// x axis, sampled by angle on each circle.
inline std::vector<Vec2> two_disk_outline(Vec2 c1, double r, double d, int per_circle = 200) {
  const Vec2 c2{c1.x + d, c1.y};
  const double half = std::acos(d / (2.0 * r));  // angle of the neck point seen from c1
  std::vector<Vec2> out;
  for (int k = 0; k < per_circle; ++k) {
    const double t = half + (2.0 * std::numbers::pi - 2.0 * half) * k / per_circle;
    out.push_back({c1.x + r * std::cos(t), c1.y - r * std::sin(t)});
  }
  for (int k = 0; k < per_circle; ++k) {
    const double t = std::numbers::pi + half + (2.0 * std::numbers::pi - 2.0 * half) * k / per_circle;
    out.push_back({c2.x + r * std::cos(t), c2.y - r * std::sin(t)});
  }
  return out;
}

/// Random star-shaped polygon around c with radius in [r_lo, r_hi],
/// smoothed so that it has a few lobes.
inline std::vector<Vec2> random_star(std::mt19937_64& rng, Vec2 c, double r_lo, double r_hi, int n = 180) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int lobes = 2 + static_cast<int>(U(rng) * 4);
  const double phase = U(rng) * 6.28;
  const double depth = U(rng);
  std::vector<Vec2> out;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    const double r = r_lo + (r_hi - r_lo) * 0.5 * (1.0 + depth * std::cos(lobes * t + phase));
    out.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
  }
  return out;
}

inline LabelImage disk_mask(int w, int h, std::span<const Vec2> centers, double r) {
  LabelImage m(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (const Vec2& c : centers) {
        if (distance({double(x), double(y)}, c) <= r) m(x, y) = 1;
      }
    }
  }
  return m;
}

}  // namespace declump::test
