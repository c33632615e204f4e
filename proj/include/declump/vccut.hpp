#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "core.hpp"
#include "cut.hpp"
#include "geom.hpp"

namespace declump {

struct AngleFilterParams {
  double theta_min_deg = 20.0;
  double theta_max_deg = 110.0;
};

inline void validate(const AngleFilterParams& p) {
  if (!(p.theta_min_deg > 0.0 && p.theta_min_deg < p.theta_max_deg && p.theta_max_deg < 180.0)) {
    throw Error(ErrorCode::InvalidConfig, "angle thresholds must satisfy 0 < Theta_min < Theta_max < 180");
  }
}

/// Keeps triangles whose edges stay inside the region and whose interior
/// angles all lie within [theta_min, theta_max].
inline std::vector<Triangle> filter_triangles(const TriangleSet& set, const ClosedBoundary& boundary,
                                              const AngleFilterParams& params) {
  std::vector<Triangle> out;
  for (const Triangle& t : set.triangles) {
    bool ok = true;
    for (int k = 0; k < 3 && ok; ++k) {
      const double a = t.angle_deg(k);
      if (a < params.theta_min_deg || a > params.theta_max_deg) ok = false;
    }
    for (int k = 0; k < 3 && ok; ++k) {
      if (segment_intersects_boundary(t.edge(k), boundary)) ok = false;
    }
    if (ok) out.push_back(t);
  }
  return out;
}

/// Shared-edge connected set of triangles. `centers[t]` is the added
/// interior vertex of `triangles[t]`.
struct TriangleGroup {
  std::vector<Triangle> triangles;
  std::vector<Vec2> centers;
  bool degenerate = false;

  /// Index of the triangle sharing edge k of triangle t, or -1.
  int neighbor(int t, int k) const {
    const Triangle& tri = triangles[static_cast<std::size_t>(t)];
    const int a = tri.v[static_cast<std::size_t>(k)];
    const int b = tri.v[static_cast<std::size_t>((k + 1) % 3)];
    for (int u = 0; u < static_cast<int>(triangles.size()); ++u) {
      if (u == t) continue;
      const auto& w = triangles[static_cast<std::size_t>(u)].v;
      const bool has_a = std::find(w.begin(), w.end(), a) != w.end();
      const bool has_b = std::find(w.begin(), w.end(), b) != w.end();
      if (has_a && has_b) return u;
    }
    return -1;
  }

  int unshared_edges() const {
    int count = 0;
    for (const Triangle& t : triangles) count += static_cast<int>(std::count(t.shared.begin(), t.shared.end(), false));
    return count;
  }
  int shared_edges() const {
    int count = 0;
    for (const Triangle& t : triangles) count += static_cast<int>(std::count(t.shared.begin(), t.shared.end(), true));
    return count / 2;
  }
};

inline bool share_edge(const Triangle& x, const Triangle& y) {
  int common = 0;
  for (int a : x.v) common += static_cast<int>(std::count(y.v.begin(), y.v.end(), a));
  return common == 2;
}

/// Connected components under the shared-edge relation, ordered by their
/// first member. Centers start at the centroids.
inline std::vector<TriangleGroup> group_triangles(std::span<const Triangle> triangles) {
  const std::size_t n = triangles.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (share_edge(triangles[i], triangles[j])) parent[std::max(find(i), find(j))] = std::min(find(i), find(j));
    }
  }

  std::vector<TriangleGroup> groups;
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    TriangleGroup& g = groups[static_cast<std::size_t>(slot[r])];
    g.triangles.push_back(triangles[i]);
    g.centers.push_back(triangles[i].centroid);
  }
  for (TriangleGroup& g : groups) {
    for (int t = 0; t < static_cast<int>(g.triangles.size()); ++t) {
      for (int k = 0; k < 3; ++k) g.triangles[static_cast<std::size_t>(t)].shared[static_cast<std::size_t>(k)] = g.neighbor(t, k) >= 0;
    }
  }
  return groups;
}

/// Outward unit normal of edge k of a counter-clockwise triangle.
inline Vec2 outward_edge_normal(const Triangle& t, int k) {
  const Segment e = t.edge(k);
  const Vec2 d = e.b - e.a;
  return normalized(Vec2{d.y, -d.x});
}

/// Cuts for one group: for every unshared edge, the boundary vertex nearest
/// the edge midpoint on the far side of the edge is joined to the triangle
/// center; every shared edge yields a center-center cut. Only vertices whose
/// cut stays inside the region are eligible. An edge with no eligible vertex
/// contributes no cut and marks the group degenerate.
inline std::vector<Cut> create_vc_cuts(TriangleGroup& group, const ClosedBoundary& boundary, int group_id = 0) {
  std::vector<Cut> cuts;
  const int n = static_cast<int>(boundary.size());
  for (int t = 0; t < static_cast<int>(group.triangles.size()); ++t) {
    const Triangle& tri = group.triangles[static_cast<std::size_t>(t)];
    const Vec2 center = group.centers[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      if (tri.shared[static_cast<std::size_t>(k)]) continue;
      const Vec2 m = tri.edge_midpoint(k);
      const Vec2 nm = outward_edge_normal(tri, k);
      std::vector<std::pair<double, int>> side;
      for (int i = 0; i < n; ++i) {
        const Vec2 v = boundary.vertices[static_cast<std::size_t>(i)];
        if (dot(v - m, nm) > 0.0) side.push_back({distance(v, m), i});
      }
      std::stable_sort(side.begin(), side.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      int pick = -1;
      for (const auto& [d, i] : side) {
        const std::array<int, 1> skip{i};
        if (segment_inside_region({boundary.vertices[static_cast<std::size_t>(i)], center}, boundary, skip)) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        group.degenerate = true;
        continue;
      }
      Cut c;
      c.kind = CutKind::VertexCenter;
      c.a = boundary.vertices[static_cast<std::size_t>(pick)];
      c.b = center;
      c.index_a = pick;
      c.triangle_b = t;
      c.owner = group_id;
      cuts.push_back(c);
    }
  }
  for (int t = 0; t < static_cast<int>(group.triangles.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int u = group.neighbor(t, k);
      if (u <= t) continue;
      Cut c;
      c.kind = CutKind::CenterCenter;
      c.a = group.centers[static_cast<std::size_t>(t)];
      c.b = group.centers[static_cast<std::size_t>(u)];
      c.triangle_a = t;
      c.triangle_b = u;
      c.owner = group_id;
      cuts.push_back(c);
    }
  }
  return cuts;
}

/// (n_i . l_hat_i + k'_i) / |l_i| with l_i = center - v_i.
inline double vc_vertex_objective(const ClosedBoundary& boundary, int i, Vec2 center, double negative_factor) {
  const auto ui = static_cast<std::size_t>(i);
  const Vec2 l = center - boundary.vertices[ui];
  const double len = norm(l);
  if (len == 0.0) return -std::numeric_limits<double>::infinity();
  return (dot(boundary.normals[ui], l / len) + biased_curvature(boundary.curvatures[ui], negative_factor)) / len;
}

inline bool vc_segment_inside(const ClosedBoundary& boundary, int i, Vec2 center) {
  const std::array<int, 1> skip{i};
  return segment_inside_region({boundary.vertices[static_cast<std::size_t>(i)], center}, boundary, skip);
}

/// Moves the boundary end of a vertex-center cut to the best vertex within
/// `radius` px of arc. The current vertex wins ties.
inline Cut optimize_vc_vertex(const Cut& cut, const ClosedBoundary& boundary, double radius = 7.0,
                              double negative_factor = 5.0) {
  const Vec2 center = cut.b;
  int best_i = -1;
  double best = -std::numeric_limits<double>::infinity();
  if (vc_segment_inside(boundary, cut.index_a, center)) {
    best_i = cut.index_a;
    best = vc_vertex_objective(boundary, best_i, center, negative_factor);
  }
  for (int i : arc_neighborhood(boundary, cut.index_a, radius)) {
    const double f = vc_vertex_objective(boundary, i, center, negative_factor);
    if (!(f > best)) continue;
    if (!vc_segment_inside(boundary, i, center)) continue;
    best = f;
    best_i = i;
  }
  if (best_i < 0) return cut;
  Cut out = cut;
  out.index_a = best_i;
  out.a = boundary.vertices[static_cast<std::size_t>(best_i)];
  return out;
}

/// [sum_i n_i . l_hat(x - v_i)] / [sum_i |x - v_i| + sum_m |x - m|].
inline double vc_center_objective(const ClosedBoundary& boundary, std::span<const int> vertices,
                                  std::span<const Vec2> shared_midpoints, Vec2 x) {
  double num = 0.0;
  double den = 0.0;
  for (int i : vertices) {
    const Vec2 l = x - boundary.vertices[static_cast<std::size_t>(i)];
    const double len = norm(l);
    if (len > 0.0) num += dot(boundary.normals[static_cast<std::size_t>(i)], l / len);
    den += len;
  }
  for (const Vec2& m : shared_midpoints) den += distance(x, m);
  return den > 0.0 ? num / den : 0.0;
}

/// Integer-pixel points strictly inside the medial triangle (the triangle of
/// edge midpoints), in raster order.
inline std::vector<Vec2> medial_triangle_lattice(const Triangle& t) {
  const std::array<Vec2, 3> m{t.edge_midpoint(0), t.edge_midpoint(1), t.edge_midpoint(2)};
  const double minx = std::ceil(std::min({m[0].x, m[1].x, m[2].x}));
  const double maxx = std::floor(std::max({m[0].x, m[1].x, m[2].x}));
  const double miny = std::ceil(std::min({m[0].y, m[1].y, m[2].y}));
  const double maxy = std::floor(std::max({m[0].y, m[1].y, m[2].y}));
  const double sign = orient(m[0], m[1], m[2]) >= 0.0 ? 1.0 : -1.0;
  std::vector<Vec2> out;
  for (double y = miny; y <= maxy; y += 1.0) {
    for (double x = minx; x <= maxx; x += 1.0) {
      const Vec2 q{x, y};
      if (sign * orient(m[0], m[1], q) > 0.0 && sign * orient(m[1], m[2], q) > 0.0 && sign * orient(m[2], m[0], q) > 0.0) {
        out.push_back(q);
      }
    }
  }
  return out;
}

/// Searches the medial-triangle lattice for the center maximizing
/// vc_center_objective. Candidates must lie inside the region with every cut
/// to `vertices` inside it too. `incumbent` is kept unless a candidate scores
/// strictly higher, so the objective never decreases.
inline Vec2 optimize_vc_center(const Triangle& triangle, std::span<const int> vertices,
                               std::span<const Vec2> shared_midpoints, const ClosedBoundary& boundary,
                               Vec2 incumbent) {
  Vec2 best_x = incumbent;
  double best = vc_center_objective(boundary, vertices, shared_midpoints, incumbent);
  for (const Vec2& x : medial_triangle_lattice(triangle)) {
    const double f = vc_center_objective(boundary, vertices, shared_midpoints, x);
    if (!(f > best)) continue;
    if (!boundary.contains(x)) continue;
    const bool visible = std::all_of(vertices.begin(), vertices.end(), [&](int i) { return vc_segment_inside(boundary, i, x); });
    if (!visible) continue;
    best = f;
    best_x = x;
  }
  return best_x;
}

struct VCCutParams {
  double neighborhood_radius = 7.0;
  double negative_curvature_factor = 5.0;
};

/// Creates the group's cuts, optimizes every boundary end, then every
/// triangle center, and re-anchors the cuts on the moved centers.
inline std::vector<Cut> build_vc_cuts(TriangleGroup& group, const ClosedBoundary& boundary, int group_id,
                                      const VCCutParams& params) {
  std::vector<Cut> cuts = create_vc_cuts(group, boundary, group_id);
  for (Cut& c : cuts) {
    if (c.kind == CutKind::VertexCenter) c = optimize_vc_vertex(c, boundary, params.neighborhood_radius, params.negative_curvature_factor);
  }
  for (int t = 0; t < static_cast<int>(group.triangles.size()); ++t) {
    const Triangle& tri = group.triangles[static_cast<std::size_t>(t)];
    std::vector<int> verts;
    for (const Cut& c : cuts) {
      if (c.kind == CutKind::VertexCenter && c.triangle_b == t) verts.push_back(c.index_a);
    }
    std::vector<Vec2> mids;
    for (int k = 0; k < 3; ++k) {
      if (tri.shared[static_cast<std::size_t>(k)]) mids.push_back(tri.edge_midpoint(k));
    }
    group.centers[static_cast<std::size_t>(t)] =
        optimize_vc_center(tri, verts, mids, boundary, group.centers[static_cast<std::size_t>(t)]);
  }
  for (Cut& c : cuts) {
    if (c.triangle_a >= 0) c.a = group.centers[static_cast<std::size_t>(c.triangle_a)];
    if (c.triangle_b >= 0) c.b = group.centers[static_cast<std::size_t>(c.triangle_b)];
  }
  return cuts;
}

}  // namespace declump
