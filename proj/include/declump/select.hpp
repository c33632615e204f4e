#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "core.hpp"
#include "cut.hpp"
#include "geom.hpp"
#include "imaging.hpp"
#include "vccut.hpp"

namespace declump {

enum class Winner { VertexVertex, VertexCenter };

inline const char* to_string(Winner w) { return w == Winner::VertexVertex ? "vertex-vertex" : "vertex-center"; }

/// Category order used throughout the vote.
enum Category : std::size_t { kDirection = 0, kCurvature = 1, kGradient = 2, kInverted = 3 };
inline constexpr std::array<const char*, 4> kCategoryNames{"direction", "curvature", "gradient", "inverted"};

using CategoryScores = std::array<double, 4>;

struct VoteResult {
  Winner winner = Winner::VertexVertex;
  CategoryScores vv_normalized{};
  CategoryScores vc_normalized{};
  // Per category: -1 skipped, 0 tie, 1 vertex-vertex, 2 vertex-center.
  std::array<int, 4> outcome{-1, -1, -1, -1};
  int vv_wins = 0;
  int vc_wins = 0;
  double vv_total = 0.0;
  double vc_total = 0.0;
  bool decided_by_total = false;
};

/// Vertex-vertex cuts contesting the region of one triangle group.
struct CompetingPair {
  int group = -1;
  std::vector<int> vv_cuts;  // indices into the vertex-vertex cut list
  CategoryScores vv_scores{};
  CategoryScores vc_scores{};
  std::array<bool, 4> used{true, true, false, false};
  VoteResult vote;
};

inline bool segment_touches_triangle(const Segment& s, const Triangle& t) {
  for (int k = 0; k < 3; ++k) {
    if (segments_properly_intersect(s, t.edge(k))) return true;
  }
  return t.strictly_contains(s.a) || t.strictly_contains(s.b) || t.strictly_contains((s.a + s.b) * 0.5);
}

/// A vertex-vertex cut joins the first group (lowest index) whose cuts or
/// triangles it properly intersects. Groups without competitors and cuts
/// without a group are not returned.
inline std::vector<CompetingPair> find_competing_pairs(std::span<const Cut> vv_cuts, std::span<const TriangleGroup> groups,
                                                       std::span<const std::vector<Cut>> group_cuts) {
  std::vector<CompetingPair> pairs(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) pairs[g].group = static_cast<int>(g);
  for (std::size_t k = 0; k < vv_cuts.size(); ++k) {
    const Segment s = vv_cuts[k].segment();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (group_cuts[g].empty()) continue;
      bool hit = false;
      for (const Cut& c : group_cuts[g]) hit = hit || segments_properly_intersect(s, c.segment());
      for (const Triangle& t : groups[g].triangles) hit = hit || segment_touches_triangle(s, t);
      if (hit) {
        pairs[g].vv_cuts.push_back(static_cast<int>(k));
        break;
      }
    }
  }
  std::vector<CompetingPair> out;
  for (auto& p : pairs) {
    if (!p.vv_cuts.empty()) out.push_back(std::move(p));
  }
  return out;
}

/// Mean of n . l_hat over every (boundary vertex, cut) incidence, with l_hat
/// pointing from the vertex along the cut.
inline double score_direction(std::span<const Cut> cuts, const ClosedBoundary& boundary) {
  double sum = 0.0;
  int count = 0;
  for (const Cut& c : cuts) {
    if (c.index_a >= 0) {
      sum += dot(boundary.normals[static_cast<std::size_t>(c.index_a)], normalized(c.b - c.a));
      ++count;
    }
    if (c.index_b >= 0) {
      sum += dot(boundary.normals[static_cast<std::size_t>(c.index_b)], normalized(c.a - c.b));
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

/// Mean curvature over the set's boundary vertices. When endpoints of two
/// different vertex-vertex cuts are within 1 px, only the first listed enters.
inline double score_curvature(std::span<const Cut> cuts, const ClosedBoundary& boundary) {
  struct Entry {
    int vertex;
    std::size_t cut;
    bool vv;
  };
  std::vector<Entry> kept;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const bool vv = cuts[k].kind == CutKind::VertexVertex;
    for (int i : cuts[k].boundary_indices()) {
      const Vec2 p = boundary.vertices[static_cast<std::size_t>(i)];
      bool dup = false;
      if (vv) {
        for (const Entry& e : kept) {
          if (e.vv && e.cut != k && distance(boundary.vertices[static_cast<std::size_t>(e.vertex)], p) <= 1.0 + 1e-9) {
            dup = true;
            break;
          }
        }
      }
      if (!dup) kept.push_back({i, k, vv});
    }
  }
  if (kept.empty()) return 0.0;
  double sum = 0.0;
  for (const Entry& e : kept) sum += boundary.curvatures[static_cast<std::size_t>(e.vertex)];
  return sum / static_cast<double>(kept.size());
}

/// Pooled mean of field samples over all cuts of the set.
inline double score_field(std::span<const Cut> cuts, const ScalarField& field) {
  double sum = 0.0;
  long count = 0;
  for (const Cut& c : cuts) {
    const SegmentSamples s = sample_segment(field, c.segment());
    sum += s.sum;
    count += s.count;
  }
  return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

inline double score_gradient(std::span<const Cut> cuts, const ScalarField& gradient) { return score_field(cuts, gradient); }
inline double score_inverted(std::span<const Cut> cuts, const ScalarField& inverted) { return score_field(cuts, inverted); }

/// Four-category vote. Each category is normalized by the mean magnitude of
/// the two competitors and won by the strictly larger value; categories where
/// both raw scores are zero, or that are unavailable, are skipped. A majority
/// of ceil((used + 1) / 2) wins outright, otherwise the larger normalized
/// total wins, and a tie goes to the vertex-vertex set.
inline VoteResult vote(const CategoryScores& vv, const CategoryScores& vc, std::array<bool, 4> available = {true, true, true, true}) {
  VoteResult r;
  int used = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    if (!available[k] || (vv[k] == 0.0 && vc[k] == 0.0)) continue;
    ++used;
    const double scale = 0.5 * (std::abs(vv[k]) + std::abs(vc[k]));
    r.vv_normalized[k] = vv[k] / scale;
    r.vc_normalized[k] = vc[k] / scale;
    r.vv_total += r.vv_normalized[k];
    r.vc_total += r.vc_normalized[k];
    // The scale is positive, so raw and normalized comparisons agree.
    if (vv[k] > vc[k]) {
      r.outcome[k] = 1;
      ++r.vv_wins;
    } else if (vc[k] > vv[k]) {
      r.outcome[k] = 2;
      ++r.vc_wins;
    } else {
      r.outcome[k] = 0;
    }
  }
  const int majority = (used + 2) / 2;
  if (r.vv_wins >= majority) {
    r.winner = Winner::VertexVertex;
  } else if (r.vc_wins >= majority) {
    r.winner = Winner::VertexCenter;
  } else {
    r.decided_by_total = true;
    // Totals within rounding of each other count as a tie.
    const double tol = 1e-9 * std::max(1.0, std::abs(r.vv_total) + std::abs(r.vc_total));
    r.winner = r.vc_total > r.vv_total + tol ? Winner::VertexCenter : Winner::VertexVertex;
  }
  return r;
}

struct ImageFields {
  ScalarField gradient;
  ScalarField inverted;
};

/// Scores both sets of a pair and votes. Without image fields only direction
/// and curvature take part.
inline void score_and_vote(CompetingPair& pair, std::span<const Cut> vv_cuts, std::span<const Cut> vc_cuts,
                           const ClosedBoundary& boundary, const std::optional<ImageFields>& fields) {
  std::vector<Cut> vv;
  for (int k : pair.vv_cuts) vv.push_back(vv_cuts[static_cast<std::size_t>(k)]);
  pair.vv_scores = {score_direction(vv, boundary), score_curvature(vv, boundary), 0.0, 0.0};
  pair.vc_scores = {score_direction(vc_cuts, boundary), score_curvature(vc_cuts, boundary), 0.0, 0.0};
  pair.used = {true, true, fields.has_value(), fields.has_value()};
  if (fields) {
    pair.vv_scores[kGradient] = score_gradient(vv, fields->gradient);
    pair.vc_scores[kGradient] = score_gradient(vc_cuts, fields->gradient);
    pair.vv_scores[kInverted] = score_inverted(vv, fields->inverted);
    pair.vc_scores[kInverted] = score_inverted(vc_cuts, fields->inverted);
  }
  pair.vote = vote(pair.vv_scores, pair.vc_scores, pair.used);
}

}  // namespace declump
