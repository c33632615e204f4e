#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "assign.hpp"
#include "core.hpp"
#include "cut.hpp"
#include "geom.hpp"

namespace declump {

struct VVCutParams {
  double r_max = 35.0;               // successor search radius for piece ordering
  double neighborhood_radius = 7.0;  // px of arc around each cut end
  double negative_curvature_factor = 5.0;
  // A cut whose shorter boundary arc is below this multiple of its chord only
  // shaves the boundary and is discarded.
  double min_arc_to_chord = 2.0;
  // Pieces with fewer vertices than this are ignored; isolated flat runs on
  // a neighbour's rim otherwise attract the ordering walk.
  int min_piece_vertices = 0;
};

/// A maximal cyclic run of boundary vertices assigned to one center, in
/// boundary (counter-clockwise) order.
struct Piece {
  int center = kUnassigned;
  std::vector<int> indices;

  int start() const { return indices.front(); }
  int end() const { return indices.back(); }
};

/// Pieces grouped by center: result[j] holds the pieces of center j in
/// boundary order.
inline std::vector<std::vector<Piece>> collect_pieces(const Assignment& assignment, std::size_t num_centers) {
  const int n = static_cast<int>(assignment.center.size());
  std::vector<std::vector<Piece>> grouped(num_centers);
  if (n == 0) return grouped;

  int origin = -1;
  for (int i = 0; i < n; ++i) {
    if (assignment.center[static_cast<std::size_t>(i)] != assignment.center[static_cast<std::size_t>((i + n - 1) % n)]) {
      origin = i;
      break;
    }
  }
  if (origin < 0) {
    // One label everywhere: a single piece covering the boundary, or nothing.
    const int c = assignment.center[0];
    if (c != kUnassigned) {
      Piece p{c, {}};
      for (int i = 0; i < n; ++i) p.indices.push_back(i);
      grouped[static_cast<std::size_t>(c)].push_back(std::move(p));
    }
    return grouped;
  }

  // Runs starting at `origin`; emit in boundary order from index 0.
  std::vector<Piece> runs;
  for (int k = 0; k < n; ++k) {
    const int i = (origin + k) % n;
    const int c = assignment.center[static_cast<std::size_t>(i)];
    if (c == kUnassigned) continue;
    const int before = (i + n - 1) % n;
    if (k == 0 || assignment.center[static_cast<std::size_t>(before)] != c) runs.push_back(Piece{c, {}});
    runs.back().indices.push_back(i);
  }
  std::stable_sort(runs.begin(), runs.end(), [](const Piece& a, const Piece& b) { return a.start() < b.start(); });
  for (Piece& p : runs) grouped[static_cast<std::size_t>(p.center)].push_back(std::move(p));
  return grouped;
}

/// Successor score of piece `to` following piece `from`:
/// (n_e . l_hat - n_s . l_hat) / |l| with l = v_s(to) - v_e(from).
inline double piece_link_score(const Piece& from, const Piece& to, const ClosedBoundary& boundary) {
  const auto e = static_cast<std::size_t>(from.end());
  const auto s = static_cast<std::size_t>(to.start());
  const Vec2 l = boundary.vertices[s] - boundary.vertices[e];
  const double len = norm(l);
  if (len == 0.0) return -std::numeric_limits<double>::infinity();
  const Vec2 lh = l / len;
  return (dot(boundary.normals[e], lh) - dot(boundary.normals[s], lh)) / len;
}

/// Orders one center's pieces into a well-oriented cyclic list. The walk
/// starts at the piece nearest the center and repeatedly follows the best
/// link within `r_max`; it stops on a revisit or when no candidate is in
/// range. Pieces never reached are dropped.
inline std::vector<Piece> order_pieces(std::span<const Piece> pieces, Vec2 center, const ClosedBoundary& boundary,
                                       double r_max) {
  if (pieces.size() <= 1) return {pieces.begin(), pieces.end()};

  std::size_t first = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    for (int i : pieces[k].indices) {
      const double d = distance(boundary.vertices[static_cast<std::size_t>(i)], center);
      if (d < best_d) {
        best_d = d;
        first = k;
      }
    }
  }

  std::vector<char> visited(pieces.size(), 0);
  std::vector<Piece> order;
  std::size_t cur = first;
  while (true) {
    visited[cur] = 1;
    order.push_back(pieces[cur]);
    std::optional<std::size_t> next;
    double next_score = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < pieces.size(); ++m) {
      if (m == cur) continue;
      const double gap = distance(boundary.vertices[static_cast<std::size_t>(pieces[m].start())],
                                  boundary.vertices[static_cast<std::size_t>(pieces[cur].end())]);
      if (gap > r_max) continue;
      const double score = piece_link_score(pieces[cur], pieces[m], boundary);
      if (score > next_score) {
        next_score = score;
        next = m;
      }
    }
    if (!next || visited[*next]) break;
    cur = *next;
  }
  return order;
}

/// Raw cuts wherever consecutive vertices of the concatenated ordered pieces
/// are more than sqrt(2) px apart, wrap-around included.
inline std::vector<Cut> create_vv_cuts(std::span<const Piece> ordered, const ClosedBoundary& boundary) {
  std::vector<int> seq;
  for (const Piece& p : ordered) seq.insert(seq.end(), p.indices.begin(), p.indices.end());
  std::vector<Cut> cuts;
  if (seq.size() < 2) return cuts;
  const double gap = std::numbers::sqrt2 + 1e-9;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const int p = seq[t];
    const int q = seq[(t + 1) % seq.size()];
    if (p == q) continue;
    const Vec2 a = boundary.vertices[static_cast<std::size_t>(p)];
    const Vec2 b = boundary.vertices[static_cast<std::size_t>(q)];
    if (distance(a, b) <= gap) continue;
    Cut c;
    c.kind = CutKind::VertexVertex;
    c.a = a;
    c.b = b;
    c.index_a = p;
    c.index_b = q;
    c.owner = ordered.front().center;
    cuts.push_back(c);
  }
  return cuts;
}

/// Drops later cuts with the same unordered endpoint pair as an earlier one.
inline std::vector<Cut> dedup_vv_cuts(std::span<const Cut> cuts) {
  std::vector<Cut> out;
  for (const Cut& c : cuts) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Cut& o) {
      return (o.index_a == c.index_a && o.index_b == c.index_b) || (o.index_a == c.index_b && o.index_b == c.index_a);
    });
    if (!dup) out.push_back(c);
  }
  return out;
}

/// Cut objective (n_i . l_hat - n_j . l_hat + k'_i + k'_j) / |l|, l = v_j - v_i,
/// with negative curvature scaled by `negative_factor`.
inline double vv_objective(const ClosedBoundary& boundary, int i, int j, double negative_factor) {
  const auto ui = static_cast<std::size_t>(i);
  const auto uj = static_cast<std::size_t>(j);
  const Vec2 l = boundary.vertices[uj] - boundary.vertices[ui];
  const double len = norm(l);
  if (len == 0.0) return -std::numeric_limits<double>::infinity();
  const Vec2 lh = l / len;
  return (dot(boundary.normals[ui], lh) - dot(boundary.normals[uj], lh) +
          biased_curvature(boundary.curvatures[ui], negative_factor) +
          biased_curvature(boundary.curvatures[uj], negative_factor)) /
         len;
}

/// Distinct endpoints and the chord stays inside the region.
inline bool vv_chord_inside(const ClosedBoundary& boundary, int i, int j) {
  if (i == j) return false;
  const std::array<int, 2> skip{i, j};
  return segment_inside_region({boundary.vertices[static_cast<std::size_t>(i)], boundary.vertices[static_cast<std::size_t>(j)]},
                               boundary, skip);
}

inline bool vv_cut_is_degenerate(const ClosedBoundary& boundary, const ArcLength& arc, int i, int j,
                                 double min_arc_to_chord) {
  const double chord = distance(boundary.vertices[static_cast<std::size_t>(i)], boundary.vertices[static_cast<std::size_t>(j)]);
  return arc.distance(i, j) < min_arc_to_chord * chord;
}

/// Exhaustive search over the two arc neighbourhoods for the endpoint pair
/// with the largest objective. Candidates whose chord leaves the region are
/// skipped; the input pair wins ties. Returns the input unchanged when the
/// neighbourhoods coincide or no candidate is admissible.
inline Cut optimize_vv_cut(const Cut& cut, const ClosedBoundary& boundary, double radius = 7.0,
                           double negative_factor = 5.0) {
  const std::vector<int> v1 = arc_neighborhood(boundary, cut.index_a, radius);
  const std::vector<int> v2 = arc_neighborhood(boundary, cut.index_b, radius);
  {
    std::vector<int> s1 = v1;
    std::vector<int> s2 = v2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 == s2) return cut;
  }

  int best_i = -1;
  int best_j = -1;
  double best = -std::numeric_limits<double>::infinity();
  if (vv_chord_inside(boundary, cut.index_a, cut.index_b)) {
    best_i = cut.index_a;
    best_j = cut.index_b;
    best = vv_objective(boundary, best_i, best_j, negative_factor);
  }
  for (int i : v1) {
    for (int j : v2) {
      if (i == j) continue;
      const double f = vv_objective(boundary, i, j, negative_factor);
      if (!(f > best)) continue;
      if (!vv_chord_inside(boundary, i, j)) continue;
      best = f;
      best_i = i;
      best_j = j;
    }
  }
  if (best_i < 0) return cut;
  Cut out = cut;
  out.index_a = best_i;
  out.index_b = best_j;
  out.a = boundary.vertices[static_cast<std::size_t>(best_i)];
  out.b = boundary.vertices[static_cast<std::size_t>(best_j)];
  return out;
}

struct VVCutResult {
  std::vector<Cut> raw;        // deduplicated, before optimization
  std::vector<Cut> cuts;       // optimized, admissible, crossing-free
  int dropped_pieces = 0;
  int discarded_cuts = 0;
};

/// Pieces -> ordering -> gap cuts -> optimization for every center, followed
/// by removal of inadmissible, near-duplicate and crossing cuts.
/// `contested(cut)` marks cuts that will face a competing vertex-center set;
/// those skip the arc-to-chord test and are left to the vote.
inline VVCutResult build_vv_cuts(const ClosedBoundary& boundary, const Assignment& assignment,
                                 std::span<const Vec2> seeds, const VVCutParams& params,
                                 const std::function<bool(const Cut&)>& contested = {}) {
  VVCutResult result;
  const ArcLength arc(boundary);
  const auto grouped = collect_pieces(assignment, seeds.size());

  std::vector<Cut> raw;
  for (std::size_t j = 0; j < grouped.size(); ++j) {
    std::vector<Piece> pieces;
    for (const Piece& p : grouped[j]) {
      if (static_cast<int>(p.indices.size()) >= params.min_piece_vertices) pieces.push_back(p);
    }
    result.dropped_pieces += static_cast<int>(grouped[j].size() - pieces.size());
    if (pieces.empty()) continue;
    const auto ordered = order_pieces(pieces, seeds[j], boundary, params.r_max);
    result.dropped_pieces += static_cast<int>(pieces.size() - ordered.size());
    const auto cuts = create_vv_cuts(ordered, boundary);
    raw.insert(raw.end(), cuts.begin(), cuts.end());
  }
  result.raw = dedup_vv_cuts(raw);

  struct Scored {
    Cut cut;
    double objective;
    bool contested;
  };
  std::vector<Scored> kept;
  for (const Cut& c : result.raw) {
    const bool exempt = contested && contested(c);
    if (!exempt && vv_cut_is_degenerate(boundary, arc, c.index_a, c.index_b, params.min_arc_to_chord)) {
      ++result.discarded_cuts;
      continue;
    }
    const Cut o = optimize_vv_cut(c, boundary, params.neighborhood_radius, params.negative_curvature_factor);
    const bool still_exempt = exempt && contested(o);
    if (!vv_chord_inside(boundary, o.index_a, o.index_b) ||
        (!still_exempt && vv_cut_is_degenerate(boundary, arc, o.index_a, o.index_b, params.min_arc_to_chord))) {
      ++result.discarded_cuts;
      continue;
    }
    kept.push_back({o, vv_objective(boundary, o.index_a, o.index_b, params.negative_curvature_factor), still_exempt});
  }

  // Near duplicates: both ends within the neighbourhood radius of the other
  // cut's ends. The better objective survives; earlier cuts win ties.
  auto near = [&](const Cut& x, const Cut& y) {
    const double r = params.neighborhood_radius;
    return (arc.distance(x.index_a, y.index_a) <= r && arc.distance(x.index_b, y.index_b) <= r) ||
           (arc.distance(x.index_a, y.index_b) <= r && arc.distance(x.index_b, y.index_a) <= r);
  };
  auto crosses = [](const Cut& x, const Cut& y) { return segments_properly_intersect(x.segment(), y.segment()); };

  std::vector<std::size_t> order(kept.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  // Uncontested cuts are placed first so that a cut the vote may still
  // reject never displaces one that stands on its own.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (kept[x].contested != kept[y].contested) return !kept[x].contested;
    return kept[x].objective > kept[y].objective;
  });
  std::vector<Cut> accepted;
  for (std::size_t k : order) {
    const Cut& c = kept[k].cut;
    const bool clash = std::any_of(accepted.begin(), accepted.end(), [&](const Cut& o) { return near(o, c) || crosses(o, c); });
    if (clash) {
      ++result.discarded_cuts;
      continue;
    }
    accepted.push_back(c);
  }
  result.cuts = std::move(accepted);
  return result;
}

}  // namespace declump
