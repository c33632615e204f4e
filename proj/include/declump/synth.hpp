#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "case.hpp"
#include "core.hpp"
#include "geom.hpp"
#include "imaging.hpp"

namespace declump {

struct Ellipse {
  Vec2 center;
  double a = 1.0;      // semi-axis along `angle`
  double b = 1.0;
  double angle = 0.0;  // radians

  /// (x/a)^2 + (y/b)^2 in the ellipse frame; <= 1 inside.
  double level(Vec2 p) const {
    const Vec2 d = p - center;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double u = c * d.x + s * d.y;
    const double v = -s * d.x + c * d.y;
    return (u * u) / (a * a) + (v * v) / (b * b);
  }
  bool contains(Vec2 p) const { return level(p) <= 1.0; }

  /// Distance from the center to the rim along unit direction `dir`.
  double radius_along(Vec2 dir) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double u = c * dir.x + s * dir.y;
    const double v = -s * dir.x + c * dir.y;
    return 1.0 / std::sqrt((u * u) / (a * a) + (v * v) / (b * b));
  }
};

struct SynthParams {
  double min_radius = 14.0;    // semi-axis range, px
  double max_radius = 22.0;
  double max_aspect = 1.35;
  double min_overlap = 0.15;   // fraction of the summed rim distances
  double max_overlap = 0.35;
  double blur_sigma = 1.0;
  double noise_sigma = 0.02;
  double background = 0.05;
  double seam_factor = 0.55;   // intensity multiplier where objects overlap
  int margin = 8;
  int max_retries = 100;
};

/// splitmix64 step, used to derive independent per-case seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace detail {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  // Fixed mapping from 53 random bits; independent of library distributions.
  const double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
  return lo + (hi - lo) * u;
}

inline double gaussian(std::mt19937_64& rng) {
  const double u1 = std::max(uniform(rng, 0.0, 1.0), 1e-300);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Background pixels not reachable from the raster border.
inline bool has_hole(const LabelImage& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Raster<std::uint8_t> seen(w, h, 0);
  std::vector<std::array<int, 2>> stack;
  for (int x = 0; x < w; ++x) {
    stack.push_back({x, 0});
    stack.push_back({x, h - 1});
  }
  for (int y = 0; y < h; ++y) {
    stack.push_back({0, y});
    stack.push_back({w - 1, y});
  }
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    if (!mask.contains(x, y) || seen(x, y) || mask(x, y) != 0) continue;
    seen(x, y) = 1;
    stack.push_back({x + 1, y});
    stack.push_back({x - 1, y});
    stack.push_back({x, y + 1});
    stack.push_back({x, y - 1});
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask(x, y) == 0 && !seen(x, y)) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Rasterizes ellipses (already in pixel coordinates) into a case: union
/// mask (label 1), truth labels (overlaps go to the nearest center), seeds
/// at the centers and a synthetic intensity image with darker overlaps.
inline ClumpCase render_clump(std::span<const Ellipse> ellipses, int width, int height, const SynthParams& params,
                              std::mt19937_64& rng, std::string id = "clump") {
  ClumpCase out;
  out.id = std::move(id);
  out.mask = LabelImage(width, height, 0);
  LabelImage truth(width, height, 0);
  ScalarField raw(width, height, params.background, FieldKind::Intensity);

  std::vector<double> brightness;
  for (std::size_t k = 0; k < ellipses.size(); ++k) brightness.push_back(detail::uniform(rng, 0.65, 0.95));

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Vec2 p{static_cast<double>(x), static_cast<double>(y)};
      int owner = -1;
      int inside = 0;
      double best = 0.0;
      for (std::size_t k = 0; k < ellipses.size(); ++k) {
        if (!ellipses[k].contains(p)) continue;
        ++inside;
        const double d = distance(p, ellipses[k].center);
        if (owner < 0 || d < best) {
          owner = static_cast<int>(k);
          best = d;
        }
      }
      if (owner < 0) continue;
      out.mask(x, y) = 1;
      truth(x, y) = owner + 1;
      const Ellipse& e = ellipses[static_cast<std::size_t>(owner)];
      double v = brightness[static_cast<std::size_t>(owner)] * (1.0 - 0.3 * e.level(p));
      if (inside > 1) v *= params.seam_factor;
      raw(x, y) = v;
    }
  }

  ScalarField img = params.blur_sigma > 0.0 ? gaussian_blur(raw, params.blur_sigma) : raw;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = img(x, y) + params.noise_sigma * detail::gaussian(rng);
      v = std::clamp(v, 0.0, 1.0);
      img(x, y) = std::max(std::round(v * 255.0), 1.0) / 255.0;
    }
  }
  img.set_kind(FieldKind::Intensity);

  for (const Ellipse& e : ellipses) out.seeds.push_back(e.center);
  out.image = std::move(img);
  out.truth = std::move(truth);
  return out;
}

/// Places `n_objects` ellipses as a chain of overlapping neighbours: each new
/// ellipse overlaps a randomly chosen earlier one by a fraction drawn from
/// the overlap range and stays clear of the others. Configurations whose
/// union is disconnected or encloses a hole are redrawn.
inline ClumpCase generate_clump(std::uint64_t rng_seed, int n_objects, const SynthParams& params = {}) {
  if (n_objects < 1) throw Error(ErrorCode::GenerationFailed, "need at least one object");
  std::mt19937_64 rng(rng_seed);
  const double two_pi = 2.0 * std::numbers::pi;

  auto random_ellipse = [&](Vec2 c) {
    Ellipse e;
    e.center = c;
    e.a = detail::uniform(rng, params.min_radius, params.max_radius);
    e.b = e.a / detail::uniform(rng, 1.0, params.max_aspect);
    e.angle = detail::uniform(rng, 0.0, std::numbers::pi);
    return e;
  };

  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    std::vector<Ellipse> es{random_ellipse({0.0, 0.0})};
    bool placed_all = true;
    for (int k = 1; k < n_objects && placed_all; ++k) {
      bool placed = false;
      for (int tries = 0; tries < 200 && !placed; ++tries) {
        const Ellipse& parent = es[static_cast<std::size_t>(rng() % es.size())];
        const double theta = detail::uniform(rng, 0.0, two_pi);
        const Vec2 dir{std::cos(theta), std::sin(theta)};
        Ellipse e = random_ellipse({0.0, 0.0});
        const double overlap = detail::uniform(rng, params.min_overlap, params.max_overlap);
        const double d = (parent.radius_along(dir) + e.radius_along(-dir)) * (1.0 - overlap);
        e.center = parent.center + dir * d;
        bool ok = true;
        for (const Ellipse& o : es) {
          const Vec2 u = normalized(e.center - o.center);
          const double reach = o.radius_along(u) + e.radius_along(-u);
          if (distance(e.center, o.center) < reach * (1.0 - params.max_overlap) - 1e-9 || o.contains(e.center) ||
              e.contains(o.center)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          es.push_back(e);
          placed = true;
        }
      }
      placed_all = placed;
    }
    if (!placed_all) continue;

    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    for (const Ellipse& e : es) {
      const double r = std::max(e.a, e.b);
      minx = std::min(minx, e.center.x - r);
      miny = std::min(miny, e.center.y - r);
      maxx = std::max(maxx, e.center.x + r);
      maxy = std::max(maxy, e.center.y + r);
    }
    const Vec2 shift{std::round(params.margin - minx), std::round(params.margin - miny)};
    for (Ellipse& e : es) e.center = e.center + shift;
    const int w = static_cast<int>(std::ceil(maxx - minx)) + 2 * params.margin + 1;
    const int h = static_cast<int>(std::ceil(maxy - miny)) + 2 * params.margin + 1;

    ClumpCase c = render_clump(es, w, h, params, rng, "synth_" + std::to_string(rng_seed));
    try {
      (void)trace_boundary(c.mask, 1);
    } catch (const Error&) {
      continue;
    }
    if (detail::has_hole(c.mask)) continue;
    return c;
  }
  throw Error(ErrorCode::GenerationFailed, "no admissible configuration after retries");
}

/// Disks of radius `r` at the given centers, rendered on a raster that fits
/// them with the default margin.
inline ClumpCase make_disk_clump(std::span<const Vec2> centers, double r, std::uint64_t rng_seed = 1,
                                 SynthParams params = {}) {
  std::vector<Ellipse> es;
  double maxx = 0.0, maxy = 0.0;
  for (const Vec2& c : centers) {
    es.push_back(Ellipse{c, r, r, 0.0});
    maxx = std::max(maxx, c.x + r);
    maxy = std::max(maxy, c.y + r);
  }
  std::mt19937_64 rng(rng_seed);
  return render_clump(es, static_cast<int>(std::ceil(maxx)) + params.margin + 1,
                      static_cast<int>(std::ceil(maxy)) + params.margin + 1, params, rng, "disks");
}

/// The standard synthetic corpus: case k uses rng seed mix_seed(seed + k)
/// and 2 + k % (max_objects - 1) objects.
inline std::vector<ClumpCase> generate_corpus(std::uint64_t seed, int count, int max_objects = 5,
                                              const SynthParams& params = {}) {
  if (max_objects < 2) throw Error(ErrorCode::GenerationFailed, "corpus needs at least two objects per clump");
  std::vector<ClumpCase> out;
  for (int k = 0; k < count; ++k) {
    ClumpCase c = generate_clump(mix_seed(seed + static_cast<std::uint64_t>(k)), 2 + k % (max_objects - 1), params);
    char id[32];
    std::snprintf(id, sizeof id, "case_%04d", k);
    c.id = id;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace declump
