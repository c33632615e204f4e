#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "assign.hpp"
#include "config.hpp"
#include "core.hpp"
#include "cut.hpp"
#include "geom.hpp"
#include "imaging.hpp"
#include "select.hpp"
#include "vccut.hpp"
#include "vvcut.hpp"

namespace declump {

struct Diagnostics {
  int unassigned_vertices = 0;
  int assignment_iterations = 0;
  int dropped_pieces = 0;
  int discarded_vv_cuts = 0;
  int triangles = 0;
  int valid_triangles = 0;
  std::vector<int> degenerate_groups;
  int crossing_cuts_removed = 0;
  int merged_regions = 0;
  bool samples_clamped = false;
};

struct PartitionResult {
  std::vector<Cut> cuts;
  std::vector<int> cut_pair;          // per cut: index into `pairs`, or -1
  std::vector<Vec2> added_vertices;   // optimized triangle centers in use
  std::vector<CompetingPair> pairs;
  LabelImage labels;                  // 0 outside, regions 1..region_count
  int region_count = 0;
  std::vector<int> seed_region;       // per seed: its region label
  Diagnostics diagnostics;
};

/// Pixels whose center is inside the polygon or within half a pixel of it.
inline Mask rasterize_boundary(const ClosedBoundary& boundary, int width, int height) {
  Mask out(width, height, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out(x, y) = boundary.contains({static_cast<double>(x), static_cast<double>(y)}) ? 1 : 0;
  }
  for (int i = 0; i < static_cast<int>(boundary.size()); ++i) {
    const Segment e = boundary.edge(i);
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(e.a.x, e.b.x) - 0.5)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(std::max(e.a.x, e.b.x) + 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(e.a.y, e.b.y) - 0.5)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(std::max(e.a.y, e.b.y) + 0.5)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (point_segment_distance({static_cast<double>(x), static_cast<double>(y)}, e) <= 0.5) out(x, y) = 1;
      }
    }
  }
  return out;
}

struct LabelStats {
  int merged_regions = 0;
};

namespace detail {

inline void burn_segment(Raster<std::uint8_t>& sep, Vec2 a, Vec2 b) {
  const double len = distance(a, b);
  const int steps = std::max(1, static_cast<int>(std::ceil(len * 4.0)));
  for (int k = 0; k <= steps; ++k) {
    const Vec2 p = a + (b - a) * (static_cast<double>(k) / steps);
    const int x = static_cast<int>(std::lround(p.x));
    const int y = static_cast<int>(std::lround(p.y));
    if (sep.contains(x, y)) sep(x, y) = 1;
  }
}

}  // namespace detail

/// Burns the cuts into the region as 1-px separators, labels the remaining
/// 4-connected components, hands separator pixels to the nearest component
/// (lower label on ties) and merges regions below `min_region_area` into the
/// neighbour sharing the longest border. Labels are 1..K in raster order of
/// each region's first pixel.
inline LabelImage apply_cuts_to_mask(const Mask& region, std::span<const Cut> cuts, int min_region_area = 0,
                                     LabelStats* stats = nullptr) {
  const int w = region.width();
  const int h = region.height();
  Raster<std::uint8_t> sep(w, h, 0);
  for (const Cut& c : cuts) {
    Vec2 a = c.a;
    Vec2 b = c.b;
    const Vec2 dir = normalized(b - a);
    // Boundary ends overshoot slightly so the separator reaches the outside.
    if (c.index_a >= 0) a = a - dir * 1.5;
    if (c.index_b >= 0) b = b + dir * 1.5;
    detail::burn_segment(sep, a, b);
  }

  LabelImage labels(w, h, 0);
  int next = 0;
  std::vector<std::array<int, 2>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!region(x, y) || sep(x, y) || labels(x, y)) continue;
      ++next;
      labels(x, y) = next;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        static constexpr std::array<std::array<int, 2>, 4> k4{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
        for (const auto& d : k4) {
          const int nx = cx + d[0];
          const int ny = cy + d[1];
          if (region.contains(nx, ny) && region(nx, ny) && !sep(nx, ny) && !labels(nx, ny)) {
            labels(nx, ny) = next;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }

  // Separator pixels: layered nearest-component growth.
  auto grow = [&](LabelImage& lab) {
    std::vector<std::array<int, 2>> pending;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (region(x, y) && lab(x, y) == 0) pending.push_back({x, y});
      }
    }
    while (!pending.empty()) {
      std::vector<std::pair<std::array<int, 2>, int>> assign;
      std::vector<std::array<int, 2>> rest;
      for (const auto& p : pending) {
        int best = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p[0] + dx;
            const int ny = p[1] + dy;
            if (!lab.contains(nx, ny)) continue;
            const int l = lab(nx, ny);
            if (l > 0 && (best == 0 || l < best)) best = l;
          }
        }
        if (best > 0) {
          assign.push_back({p, best});
        } else {
          rest.push_back(p);
        }
      }
      if (assign.empty()) {
        // Left-over pixels touch no component: each 8-connected patch of
        // them becomes a region of its own.
        for (const auto& p : rest) {
          if (lab(p[0], p[1]) != 0) continue;
          lab(p[0], p[1]) = ++next;
          std::vector<std::array<int, 2>> todo{p};
          while (!todo.empty()) {
            const auto [cx, cy] = todo.back();
            todo.pop_back();
            for (int dy = -1; dy <= 1; ++dy) {
              for (int dx = -1; dx <= 1; ++dx) {
                if (lab.contains(cx + dx, cy + dy) && region(cx + dx, cy + dy) && lab(cx + dx, cy + dy) == 0) {
                  lab(cx + dx, cy + dy) = next;
                  todo.push_back({cx + dx, cy + dy});
                }
              }
            }
          }
        }
        break;
      }
      for (const auto& [p, l] : assign) lab(p[0], p[1]) = l;
      pending = std::move(rest);
    }
  };
  grow(labels);

  int merged = 0;
  std::set<int> isolated;
  while (true) {
    std::map<int, int> area;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (labels(x, y) > 0) ++area[labels(x, y)];
      }
    }
    if (area.size() <= 1) break;
    int smallest = 0;
    for (const auto& [l, a] : area) {
      if (a < min_region_area && !isolated.count(l) && (smallest == 0 || a < area[smallest])) smallest = l;
    }
    if (smallest == 0) break;
    std::map<int, int> border;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (labels(x, y) != smallest) continue;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if (!labels.contains(nx, ny)) continue;
            const int l = labels(nx, ny);
            if (l > 0 && l != smallest) ++border[l];
          }
        }
      }
    }
    int target = 0;
    for (const auto& [l, c] : border) {
      if (target == 0 || c > border[target]) target = l;
    }
    if (target == 0) {
      isolated.insert(smallest);
      continue;
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (labels(x, y) == smallest) labels(x, y) = target;
      }
    }
    ++merged;
  }

  // Compact relabelling in raster order.
  std::map<int, int> remap;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int l = labels(x, y);
      if (l > 0 && !remap.count(l)) {
        const int id = static_cast<int>(remap.size()) + 1;
        remap[l] = id;
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (labels(x, y) > 0) labels(x, y) = remap[labels(x, y)];
    }
  }
  if (stats != nullptr) stats->merged_regions = merged;
  return labels;
}

inline int count_regions(const LabelImage& labels) {
  int count = 0;
  for (std::int32_t l : labels.values()) count = std::max(count, static_cast<int>(l));
  return count;
}

/// Region label at the seed's pixel, searching outward when the pixel itself
/// is unlabeled.
inline int region_of(const LabelImage& labels, Vec2 p) {
  const int x0 = static_cast<int>(std::lround(p.x));
  const int y0 = static_cast<int>(std::lround(p.y));
  for (int r = 0; r <= 3; ++r) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
        if (labels.contains(x0 + dx, y0 + dy) && labels(x0 + dx, y0 + dy) > 0) return labels(x0 + dx, y0 + dy);
      }
    }
  }
  return 0;
}

/// Full partition of one clump: assignment, vertex-vertex cuts, (with >= 3
/// seeds) triangulation and vertex-center cuts, voting, then labeling.
inline PartitionResult partition_clump(const ClosedBoundary& boundary, std::span<const Vec2> seeds,
                                       const ScalarField* image, const Config& config, const Mask* region = nullptr) {
  validate(config);
  if (seeds.empty()) throw Error(ErrorCode::EmptySeeds, "no seed points");
  for (std::size_t j = 0; j < seeds.size(); ++j) {
    if (!boundary.contains(seeds[j])) throw Error(ErrorCode::SeedOutsideBoundary, "seed " + std::to_string(j) + " lies outside the boundary");
  }

  PartitionResult result;
  Diagnostics& diag = result.diagnostics;

  const Assignment assignment = assign(boundary, seeds, config.assign_params());
  diag.assignment_iterations = assignment.outer_iterations;
  diag.unassigned_vertices = static_cast<int>(std::count(assignment.center.begin(), assignment.center.end(), kUnassigned));

  std::vector<TriangleGroup> groups;
  std::vector<std::vector<Cut>> group_cuts;
  if (seeds.size() >= 3) {
    const TriangleSet tris = delaunay(seeds);
    diag.triangles = static_cast<int>(tris.triangles.size());
    const auto valid = filter_triangles(tris, boundary, config.angle_params());
    diag.valid_triangles = static_cast<int>(valid.size());
    groups = group_triangles(valid);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      group_cuts.push_back(build_vc_cuts(groups[g], boundary, static_cast<int>(g), config.vc_params()));
      if (groups[g].degenerate) diag.degenerate_groups.push_back(static_cast<int>(g));
    }
  }

  // Vertex-vertex cuts over a valid triangle are settled by the vote, not by
  // the arc-to-chord test.
  auto contested = [&](const Cut& c) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (group_cuts[g].empty()) continue;
      for (const Triangle& t : groups[g].triangles) {
        if (segment_touches_triangle(c.segment(), t)) return true;
      }
    }
    return false;
  };
  const VVCutResult vv = build_vv_cuts(boundary, assignment, seeds, config.vv_params(), contested);
  diag.dropped_pieces = vv.dropped_pieces;
  diag.discarded_vv_cuts = vv.discarded_cuts;

  std::optional<ImageFields> fields;
  if (image != nullptr && !image->empty()) {
    fields = ImageFields{gradient_magnitude(*image, config.blur_sigma, config.blur_sigma, config.closing_radius),
                         inverted_image(*image, config.blur_sigma)};
  }

  result.pairs = find_competing_pairs(vv.cuts, groups, group_cuts);
  std::vector<int> vv_pair(vv.cuts.size(), -1);
  std::vector<int> group_pair(groups.size(), -1);
  for (std::size_t p = 0; p < result.pairs.size(); ++p) {
    CompetingPair& pair = result.pairs[p];
    score_and_vote(pair, vv.cuts, group_cuts[static_cast<std::size_t>(pair.group)], boundary, fields);
    for (int k : pair.vv_cuts) vv_pair[static_cast<std::size_t>(k)] = static_cast<int>(p);
    group_pair[static_cast<std::size_t>(pair.group)] = static_cast<int>(p);
  }
  if (fields) {
    for (const Cut& c : vv.cuts) diag.samples_clamped = diag.samples_clamped || sample_segment(fields->inverted, c.segment()).clamped;
  }

  // Candidate final set: unpaired vertex-vertex cuts, each pair's winner and
  // unpaired groups, in that order.
  std::vector<Cut> candidates;
  std::vector<int> candidate_pair;
  for (std::size_t k = 0; k < vv.cuts.size(); ++k) {
    const int p = vv_pair[k];
    if (p >= 0 && result.pairs[static_cast<std::size_t>(p)].vote.winner != Winner::VertexVertex) continue;
    candidates.push_back(vv.cuts[k]);
    candidate_pair.push_back(p);
  }
  std::vector<char> group_used(groups.size(), 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int p = group_pair[g];
    if (p >= 0 && result.pairs[static_cast<std::size_t>(p)].vote.winner != Winner::VertexCenter) continue;
    for (const Cut& c : group_cuts[g]) {
      candidates.push_back(c);
      candidate_pair.push_back(p);
    }
  }

  // Final guard: a cut may not cross the boundary or an accepted cut.
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Cut& c = candidates[k];
    const std::vector<int> skip = c.boundary_indices();
    bool ok = segment_inside_region(c.segment(), boundary, skip);
    for (const Cut& o : result.cuts) ok = ok && !segments_properly_intersect(o.segment(), c.segment());
    if (!ok) {
      ++diag.crossing_cuts_removed;
      continue;
    }
    result.cuts.push_back(c);
    result.cut_pair.push_back(candidate_pair[k]);
    if (c.kind != CutKind::VertexVertex) group_used[static_cast<std::size_t>(c.owner)] = 1;
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (!group_used[g]) continue;
    for (std::size_t t = 0; t < groups[g].triangles.size(); ++t) {
      const bool anchored = std::any_of(result.cuts.begin(), result.cuts.end(), [&](const Cut& c) {
        return c.kind != CutKind::VertexVertex && c.owner == static_cast<int>(g) &&
               (c.triangle_a == static_cast<int>(t) || c.triangle_b == static_cast<int>(t));
      });
      if (anchored) result.added_vertices.push_back(groups[g].centers[t]);
    }
  }

  // Labeling raster: explicit region, else the image extent, else the
  // boundary's bounding box from the origin.
  Mask mask;
  if (region != nullptr) {
    mask = *region;
  } else {
    int w = 0;
    int h = 0;
    if (image != nullptr && !image->empty()) {
      w = image->width();
      h = image->height();
    } else {
      for (const Vec2& v : boundary.vertices) {
        w = std::max(w, static_cast<int>(std::ceil(v.x)) + 2);
        h = std::max(h, static_cast<int>(std::ceil(v.y)) + 2);
      }
    }
    mask = rasterize_boundary(boundary, w, h);
  }
  LabelStats stats;
  result.labels = apply_cuts_to_mask(mask, result.cuts, config.min_region_area, &stats);
  diag.merged_regions = stats.merged_regions;
  result.region_count = count_regions(result.labels);
  for (const Vec2& s : seeds) result.seed_region.push_back(region_of(result.labels, s));
  return result;
}

}  // namespace declump
