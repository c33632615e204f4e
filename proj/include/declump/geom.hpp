#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "core.hpp"

namespace declump {

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Twice the signed area of (a, b, c); positive for a left turn.
inline double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

/// True iff the open interiors of the two segments cross. Shared endpoints,
/// touching and collinear overlap are not proper intersections.
inline bool segments_properly_intersect(const Segment& s, const Segment& t) {
  if (s.a == s.b || t.a == t.b) return false;
  if (std::max(s.a.x, s.b.x) < std::min(t.a.x, t.b.x) || std::max(t.a.x, t.b.x) < std::min(s.a.x, s.b.x) ||
      std::max(s.a.y, s.b.y) < std::min(t.a.y, t.b.y) || std::max(t.a.y, t.b.y) < std::min(s.a.y, s.b.y)) {
    return false;
  }
  const double d1 = orient(t.a, t.b, s.a);
  const double d2 = orient(t.a, t.b, s.b);
  const double d3 = orient(s.a, s.b, t.a);
  const double d4 = orient(s.a, s.b, t.b);
  return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
         ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

inline double signed_area(std::span<const Vec2> polygon) {
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * twice;
}

inline double perimeter(std::span<const Vec2> polygon) {
  double total = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) total += distance(polygon[i], polygon[(i + 1) % n]);
  return total;
}

/// Crossing-number test. Points exactly on an edge may land on either side.
inline bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

inline double point_segment_distance(Vec2 p, const Segment& s) {
  const Vec2 d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return distance(p, s.a + d * t);
}

// ---------------------------------------------------------------------------
// Closed boundary
// ---------------------------------------------------------------------------

/// Counter-clockwise (positive signed area) closed polyline with per-vertex
/// inward unit normals and signed curvature. Concave locations carry
/// positive curvature; a disk of radius r has curvature close to -1/r.
struct ClosedBoundary {
  std::vector<Vec2> vertices;
  std::vector<Vec2> normals;
  std::vector<double> curvatures;

  std::size_t size() const noexcept { return vertices.size(); }
  int next(int i) const noexcept { return (i + 1) % static_cast<int>(vertices.size()); }
  int prev(int i) const noexcept {
    const int n = static_cast<int>(vertices.size());
    return (i + n - 1) % n;
  }
  Segment edge(int i) const { return {vertices[static_cast<std::size_t>(i)], vertices[static_cast<std::size_t>(next(i))]}; }
  double edge_length(int i) const { return distance(vertices[static_cast<std::size_t>(i)], vertices[static_cast<std::size_t>(next(i))]); }
  double mean_spacing() const { return perimeter(vertices) / static_cast<double>(vertices.size()); }
  bool contains(Vec2 p) const { return point_in_polygon(p, vertices); }
};

/// Outer contour of one 8-connected region by Moore-neighbour tracing.
/// Returned pixel centers run in the tracing order; holes are ignored.
inline std::vector<Vec2> trace_boundary(const LabelImage& mask, std::int32_t label) {
  const int w = mask.width();
  const int h = mask.height();
  auto is_fg = [&](int x, int y) { return mask.contains(x, y) && mask(x, y) == label; };

  std::optional<std::array<int, 2>> start;
  std::size_t count = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask(x, y) != label) continue;
      if (!start) start = std::array<int, 2>{x, y};
      ++count;
    }
  }
  if (!start) throw Error(ErrorCode::NotFound, "label " + std::to_string(label) + " absent from mask");

  // Connectivity check (8-neighbourhood flood fill).
  {
    Raster<std::uint8_t> seen(w, h, 0);
    std::vector<std::array<int, 2>> stack{*start};
    seen((*start)[0], (*start)[1]) = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
      const auto [x, y] = stack.back();
      stack.pop_back();
      ++reached;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (is_fg(nx, ny) && !seen(nx, ny)) {
            seen(nx, ny) = 1;
            stack.push_back({nx, ny});
          }
        }
      }
    }
    if (reached != count) {
      throw Error(ErrorCode::AmbiguousRegion, "label " + std::to_string(label) + " has several components");
    }
  }

  // Clockwise on screen (y down): E, SE, S, SW, W, NW, N, NE.
  static constexpr std::array<std::array<int, 2>, 8> kDirs{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
  auto dir_index = [](int dx, int dy) {
    for (int k = 0; k < 8; ++k) {
      if (kDirs[static_cast<std::size_t>(k)][0] == dx && kDirs[static_cast<std::size_t>(k)][1] == dy) return k;
    }
    return -1;
  };

  struct State {
    int x, y, back;
    bool operator==(const State&) const = default;
  };
  auto step = [&](const State& s) -> std::optional<State> {
    for (int k = 1; k <= 8; ++k) {
      const int d = (s.back + k) % 8;
      const int qx = s.x + kDirs[static_cast<std::size_t>(d)][0];
      const int qy = s.y + kDirs[static_cast<std::size_t>(d)][1];
      if (!is_fg(qx, qy)) continue;
      const int pd = (d + 7) % 8;
      const int bx = s.x + kDirs[static_cast<std::size_t>(pd)][0];
      const int by = s.y + kDirs[static_cast<std::size_t>(pd)][1];
      return State{qx, qy, dir_index(bx - qx, by - qy)};
    }
    return std::nullopt;
  };

  // The first raster-order pixel has a background west neighbour.
  const State s0{(*start)[0], (*start)[1], 4};
  const auto s1 = step(s0);
  if (!s1) throw Error(ErrorCode::TooSmall, "single-pixel region");

  std::vector<Vec2> loop;
  State cur = *s1;
  const std::size_t limit = 8 * count + 16;
  do {
    loop.push_back({static_cast<double>(cur.x), static_cast<double>(cur.y)});
    cur = *step(cur);
  } while (!(cur == *s1) && loop.size() <= limit);

  // Rotate so the loop starts at the first raster-order pixel.
  const Vec2 first{static_cast<double>(s0.x), static_cast<double>(s0.y)};
  if (auto it = std::find(loop.begin(), loop.end(), first); it != loop.end()) std::rotate(loop.begin(), it, loop.end());

  if (loop.size() < 8) throw Error(ErrorCode::TooSmall, "contour has fewer than 8 vertices");
  return loop;
}

/// True if two non-adjacent edges of the closed polygon properly cross.
inline bool polygon_self_intersects(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Segment ei{polygon[i], polygon[(i + 1) % n]};
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_properly_intersect(ei, {polygon[j], polygon[(j + 1) % n]})) return true;
    }
  }
  return false;
}

/// Resamples to uniform arc spacing close to 1 px and forces counter-clockwise
/// orientation. Normals and curvature are left empty.
inline ClosedBoundary resample_and_orient(std::span<const Vec2> polygon) {
  std::vector<Vec2> pts;
  pts.reserve(polygon.size());
  for (const Vec2& p : polygon) {
    if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
  }
  while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  // Coarse polygons are fine; what matters is the vertex count after resampling.
  if (pts.size() < 3 || perimeter(pts) < 8.0) throw Error(ErrorCode::TooSmall, "polygon resamples to fewer than 8 vertices");
  if (polygon_self_intersects(pts)) throw Error(ErrorCode::InvalidBoundary, "polygon self-intersects");
  if (signed_area(pts) == 0.0) throw Error(ErrorCode::InvalidBoundary, "polygon has zero area");

  if (signed_area(pts) < 0.0) {
    std::reverse(pts.begin() + 1, pts.end());
  }

  const double total = perimeter(pts);
  const std::size_t count = std::max<std::size_t>(8, static_cast<std::size_t>(std::lround(total)));
  const double spacing = total / static_cast<double>(count);

  ClosedBoundary out;
  out.vertices.reserve(count);
  std::size_t seg = 0;
  double seg_start = 0.0;  // arc position of pts[seg]
  double seg_len = distance(pts[0], pts[1 % pts.size()]);
  for (std::size_t k = 0; k < count; ++k) {
    const double s = spacing * static_cast<double>(k);
    while (seg + 1 < pts.size() && seg_start + seg_len < s) {
      seg_start += seg_len;
      ++seg;
      seg_len = distance(pts[seg], pts[(seg + 1) % pts.size()]);
    }
    const double t = seg_len > 0.0 ? std::clamp((s - seg_start) / seg_len, 0.0, 1.0) : 0.0;
    const Vec2 a = pts[seg];
    const Vec2 b = pts[(seg + 1) % pts.size()];
    out.vertices.push_back(a + (b - a) * t);
  }
  return out;
}

/// Closed polyline smoothed by a Gaussian of `sigma` px of arc (vertex
/// spacing taken as the mean spacing); sigma <= 0 returns the input.
inline std::vector<Vec2> smooth_closed(std::span<const Vec2> vertices, double spacing, double sigma) {
  const int n = static_cast<int>(vertices.size());
  if (!(sigma > 0.0) || n == 0) return {vertices.begin(), vertices.end()};
  const double s = sigma / spacing;
  const int radius = std::min(static_cast<int>(std::ceil(3.0 * s)), (n - 1) / 2);
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * (k * k) / (s * s));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  std::vector<Vec2> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec2 acc{};
    for (int k = -radius; k <= radius; ++k) {
      acc += vertices[static_cast<std::size_t>(((i + k) % n + n) % n)] * (kernel[static_cast<std::size_t>(k + radius)] / sum);
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

/// Inward unit normals from the central-difference tangent of the contour
/// smoothed by `smooth_sigma` px, widening the stencil when neighbours
/// coincide.
inline std::vector<Vec2> compute_normals(const ClosedBoundary& boundary, double smooth_sigma = 0.0) {
  const int n = static_cast<int>(boundary.size());
  const std::vector<Vec2> pts = smooth_closed(boundary.vertices, boundary.mean_spacing(), smooth_sigma);
  std::vector<Vec2> normals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec2 tangent{};
    for (int k = 1; k <= n / 2 && norm(tangent) == 0.0; ++k) {
      tangent = pts[static_cast<std::size_t>((i + k) % n)] - pts[static_cast<std::size_t>((i - k % n + n) % n)];
    }
    if (norm(tangent) == 0.0) throw Error(ErrorCode::DegenerateVertex, "zero tangent at vertex " + std::to_string(i));
    normals[static_cast<std::size_t>(i)] = normalized(perp_left(tangent));
  }
  return normals;
}

/// Signed curvature as the negated turning rate of the Gaussian-smoothed
/// tangent angle over a +-window arc-length stencil. Units are 1/px.
inline std::vector<double> compute_curvature(const ClosedBoundary& boundary, double window = 5.0,
                                             double smooth_sigma = 2.0) {
  const int n = static_cast<int>(boundary.size());
  const double spacing = boundary.mean_spacing();
  const int half = std::max(1, static_cast<int>(std::lround(window / spacing)));
  if (n < 2 * half + 3) throw Error(ErrorCode::BoundaryTooShort, "boundary shorter than curvature stencil");
  auto wrap = [n](int i) { return static_cast<std::size_t>(((i % n) + n) % n); };

  const std::vector<Vec2> smooth = smooth_closed(boundary.vertices, spacing, smooth_sigma);

  std::vector<double> angle(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Vec2 t = smooth[wrap(i + 1)] - smooth[wrap(i - 1)];
    angle[static_cast<std::size_t>(i)] = std::atan2(t.y, t.x);
  }

  std::vector<double> edge(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) edge[static_cast<std::size_t>(i)] = boundary.edge_length(i);

  std::vector<double> curvature(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double turn = angle[wrap(i + half)] - angle[wrap(i - half)];
    turn = std::remainder(turn, 2.0 * std::numbers::pi);
    double arc = 0.0;
    for (int k = -half; k < half; ++k) arc += edge[wrap(i + k)];
    curvature[static_cast<std::size_t>(i)] = arc > 0.0 ? -turn / arc : 0.0;
  }
  return curvature;
}

/// Resample, orient and fill normals and curvature in one call.
inline ClosedBoundary make_boundary(std::span<const Vec2> polygon, double curvature_window = 5.0,
                                    double curvature_sigma = 2.0, double normal_sigma = 0.0) {
  ClosedBoundary b = resample_and_orient(polygon);
  b.normals = compute_normals(b, normal_sigma);
  b.curvatures = compute_curvature(b, curvature_window, curvature_sigma);
  return b;
}

/// Cumulative arc-length positions for cyclic arc distances.
class ArcLength {
 public:
  explicit ArcLength(const ClosedBoundary& boundary) : pos_(boundary.size() + 1, 0.0) {
    for (std::size_t i = 0; i < boundary.size(); ++i) pos_[i + 1] = pos_[i] + boundary.edge_length(static_cast<int>(i));
  }

  double total() const { return pos_.back(); }
  double position(int i) const { return pos_[static_cast<std::size_t>(i)]; }

  /// Length of the shorter of the two boundary arcs joining i and j.
  double distance(int i, int j) const {
    const double d = std::abs(pos_[static_cast<std::size_t>(i)] - pos_[static_cast<std::size_t>(j)]);
    return std::min(d, total() - d);
  }

 private:
  std::vector<double> pos_;
};

/// Boundary indices whose cyclic arc distance from `center` is at most
/// `radius`, ordered from the farthest backward to the farthest forward.
inline std::vector<int> arc_neighborhood(const ClosedBoundary& boundary, int center, double radius) {
  const int n = static_cast<int>(boundary.size());
  std::vector<int> back;
  std::vector<int> fwd;
  double s = 0.0;
  for (int i = center; static_cast<int>(back.size() + fwd.size()) + 1 < n;) {
    const int p = boundary.prev(i);
    s += boundary.edge_length(p);
    if (s > radius + 1e-9) break;
    back.push_back(p);
    i = p;
  }
  s = 0.0;
  for (int i = center; static_cast<int>(back.size() + fwd.size()) + 1 < n;) {
    const int q = boundary.next(i);
    s += boundary.edge_length(i);
    if (s > radius + 1e-9) break;
    if (std::find(back.begin(), back.end(), q) != back.end()) break;
    fwd.push_back(q);
    i = q;
  }
  std::vector<int> out(back.rbegin(), back.rend());
  out.push_back(center);
  out.insert(out.end(), fwd.begin(), fwd.end());
  return out;
}

/// True iff `seg` properly crosses a boundary edge that is not incident to a
/// vertex listed in `skip`.
inline bool segment_intersects_boundary(const Segment& seg, const ClosedBoundary& boundary,
                                        std::span<const int> skip = {}) {
  const int n = static_cast<int>(boundary.size());
  const double minx = std::min(seg.a.x, seg.b.x);
  const double maxx = std::max(seg.a.x, seg.b.x);
  const double miny = std::min(seg.a.y, seg.b.y);
  const double maxy = std::max(seg.a.y, seg.b.y);
  for (int i = 0; i < n; ++i) {
    const Vec2 p = boundary.vertices[static_cast<std::size_t>(i)];
    const Vec2 q = boundary.vertices[static_cast<std::size_t>(boundary.next(i))];
    if (std::max(p.x, q.x) < minx || std::min(p.x, q.x) > maxx || std::max(p.y, q.y) < miny ||
        std::min(p.y, q.y) > maxy) {
      continue;
    }
    if (!skip.empty()) {
      const int j = boundary.next(i);
      if (std::find(skip.begin(), skip.end(), i) != skip.end() || std::find(skip.begin(), skip.end(), j) != skip.end()) {
        continue;
      }
    }
    if (segments_properly_intersect(seg, {p, q})) return true;
  }
  return false;
}

/// A segment whose endpoints sit on or inside the boundary lies inside the
/// region iff it crosses no edge and its midpoint is interior.
inline bool segment_inside_region(const Segment& seg, const ClosedBoundary& boundary, std::span<const int> skip = {}) {
  if (segment_intersects_boundary(seg, boundary, skip)) return false;
  return boundary.contains((seg.a + seg.b) * 0.5);
}

// ---------------------------------------------------------------------------
// Delaunay triangulation
// ---------------------------------------------------------------------------

struct Triangle {
  std::array<int, 3> v{};    // seed indices, counter-clockwise
  std::array<Vec2, 3> p{};   // seed positions
  Vec2 circumcenter;
  double circumradius = 0.0;
  Vec2 centroid;
  // Edge k joins v[k] and v[(k + 1) % 3]; set by grouping.
  std::array<bool, 3> shared{false, false, false};

  Segment edge(int k) const { return {p[static_cast<std::size_t>(k)], p[static_cast<std::size_t>((k + 1) % 3)]}; }
  Vec2 edge_midpoint(int k) const { const Segment e = edge(k); return (e.a + e.b) * 0.5; }

  /// Interior angle at v[k] in degrees.
  double angle_deg(int k) const {
    const Vec2 a = p[static_cast<std::size_t>(k)];
    const Vec2 b = p[static_cast<std::size_t>((k + 1) % 3)];
    const Vec2 c = p[static_cast<std::size_t>((k + 2) % 3)];
    const Vec2 u = b - a;
    const Vec2 w = c - a;
    return std::atan2(std::abs(cross(u, w)), dot(u, w)) * 180.0 / std::numbers::pi;
  }

  bool strictly_contains(Vec2 q) const {
    return orient(p[0], p[1], q) > 0.0 && orient(p[1], p[2], q) > 0.0 && orient(p[2], p[0], q) > 0.0;
  }
};

inline Triangle make_triangle(std::array<int, 3> v, std::span<const Vec2> points) {
  Triangle t;
  t.v = v;
  for (std::size_t k = 0; k < 3; ++k) t.p[k] = points[static_cast<std::size_t>(v[k])];
  if (orient(t.p[0], t.p[1], t.p[2]) < 0.0) {
    std::swap(t.v[1], t.v[2]);
    std::swap(t.p[1], t.p[2]);
  }
  const Vec2 a = t.p[0];
  const Vec2 b = t.p[1] - a;
  const Vec2 c = t.p[2] - a;
  const double d = 2.0 * cross(b, c);
  const double bb = dot(b, b);
  const double cc = dot(c, c);
  const Vec2 rel{(c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d};
  t.circumcenter = a + rel;
  t.circumradius = norm(rel);
  t.centroid = (t.p[0] + t.p[1] + t.p[2]) / 3.0;
  return t;
}

enum class TriangulationStatus { Ok, EmptyTriangulation };

struct TriangleSet {
  std::vector<Triangle> triangles;
  TriangulationStatus status = TriangulationStatus::Ok;
};

/// Positive iff d lies strictly inside the circumcircle of the CCW triangle abc.
inline double in_circle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

/// Bowyer-Watson insertion in index order. A point on a circumcircle does not
/// invalidate the triangle, so cocircular ties keep the earlier triangles.
inline TriangleSet delaunay(std::span<const Vec2> points) {
  TriangleSet out;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance(points[i], points[j]) < 1e-9) {
        throw Error(ErrorCode::DuplicateSeed, "seeds " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
  bool collinear = true;
  for (std::size_t k = 2; k < n && collinear; ++k) {
    if (std::abs(orient(points[0], points[1], points[k])) > 1e-9) collinear = false;
  }
  if (n < 3 || collinear) {
    out.status = TriangulationStatus::EmptyTriangulation;
    return out;
  }

  double minx = points[0].x, maxx = points[0].x, miny = points[0].y, maxy = points[0].y;
  for (const Vec2& p : points) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  const double extent = std::max({maxx - minx, maxy - miny, 1.0});
  const Vec2 mid{0.5 * (minx + maxx), 0.5 * (miny + maxy)};
  constexpr double kSuper = 100.0;

  std::vector<Vec2> pts(points.begin(), points.end());
  pts.push_back(mid + Vec2{-kSuper * extent, -kSuper * extent});
  pts.push_back(mid + Vec2{kSuper * extent, -kSuper * extent});
  pts.push_back(mid + Vec2{0.0, kSuper * extent});
  const int s0 = static_cast<int>(n);

  std::vector<std::array<int, 3>> tris{{s0, s0 + 1, s0 + 2}};
  for (int i = 0; i < static_cast<int>(n); ++i) {
    const Vec2 q = pts[static_cast<std::size_t>(i)];
    std::vector<std::array<int, 3>> keep;
    std::vector<std::array<int, 2>> edges;
    for (const auto& t : tris) {
      if (in_circle(pts[static_cast<std::size_t>(t[0])], pts[static_cast<std::size_t>(t[1])], pts[static_cast<std::size_t>(t[2])], q) > 0.0) {
        for (int k = 0; k < 3; ++k) edges.push_back({t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)]});
      } else {
        keep.push_back(t);
      }
    }
    // Cavity boundary: edges that appear once (interior edges appear reversed).
    for (const auto& e : edges) {
      const bool interior = std::any_of(edges.begin(), edges.end(), [&](const auto& f) { return f[0] == e[1] && f[1] == e[0]; });
      if (!interior) keep.push_back({e[0], e[1], i});
    }
    tris = std::move(keep);
  }

  for (const auto& t : tris) {
    if (t[0] >= s0 || t[1] >= s0 || t[2] >= s0) continue;
    out.triangles.push_back(make_triangle(t, points));
  }
  // Deterministic order independent of cavity bookkeeping.
  for (Triangle& t : out.triangles) {
    while (t.v[0] > t.v[1] || t.v[0] > t.v[2]) {
      std::rotate(t.v.begin(), t.v.begin() + 1, t.v.end());
      std::rotate(t.p.begin(), t.p.begin() + 1, t.p.end());
    }
  }
  std::sort(out.triangles.begin(), out.triangles.end(), [](const Triangle& a, const Triangle& b) { return a.v < b.v; });
  if (out.triangles.empty()) out.status = TriangulationStatus::EmptyTriangulation;
  return out;
}

}  // namespace declump
