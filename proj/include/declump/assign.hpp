#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "core.hpp"
#include "geom.hpp"

namespace declump {

struct AssignParams {
  double r_max = 35.0;     // px
  double theta_min = 0.5;  // minimum normal . direction
};

inline void validate(const AssignParams& p) {
  if (!(p.r_max > 0.0)) throw Error(ErrorCode::InvalidConfig, "R_max must be positive");
  if (!(p.theta_min >= -1.0 && p.theta_min <= 1.0)) throw Error(ErrorCode::InvalidConfig, "theta_min must lie in [-1, 1]");
}

/// Score of assigning vertex i to center j, (l_hat . n) / |l| in 1/px, with
/// a validity flag per entry.
class AssignmentScores {
 public:
  AssignmentScores() = default;
  AssignmentScores(std::size_t vertices, std::size_t centers)
      : vertices_(vertices), centers_(centers), score_(vertices * centers, 0.0), valid_(vertices * centers, 0) {}

  std::size_t num_vertices() const noexcept { return vertices_; }
  std::size_t num_centers() const noexcept { return centers_; }

  double score(std::size_t i, std::size_t j) const { return score_[i * centers_ + j]; }
  bool valid(std::size_t i, std::size_t j) const { return valid_[i * centers_ + j] != 0; }
  void set(std::size_t i, std::size_t j, double s, bool ok) {
    score_[i * centers_ + j] = s;
    valid_[i * centers_ + j] = ok ? 1 : 0;
  }
  void invalidate(std::size_t i, std::size_t j) { valid_[i * centers_ + j] = 0; }

 private:
  std::size_t vertices_ = 0;
  std::size_t centers_ = 0;
  std::vector<double> score_;
  std::vector<char> valid_;
};

inline constexpr int kUnassigned = -1;

struct Assignment {
  std::vector<int> center;     // per vertex, or kUnassigned
  std::vector<double> score;   // winning score, 0 when unassigned
  std::vector<Vec2> vector;    // c_{a_i} - v_i
  int outer_iterations = 0;

  bool assigned(std::size_t i) const { return center[i] != kUnassigned; }
};

inline AssignmentScores score_matrix(const ClosedBoundary& boundary, std::span<const Vec2> seeds,
                                     const AssignParams& params) {
  if (seeds.empty()) throw Error(ErrorCode::EmptySeeds, "no seed points");
  validate(params);
  const std::size_t n = boundary.size();
  AssignmentScores scores(n, seeds.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 v = boundary.vertices[i];
    const Vec2 nrm = boundary.normals[i];
    const std::array<int, 1> skip{static_cast<int>(i)};
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const Vec2 l = seeds[j] - v;
      const double len = norm(l);
      if (len == 0.0) {
        scores.set(i, j, 0.0, false);
        continue;
      }
      const double align = dot(l, nrm) / len;
      const double s = align / len;
      bool ok = align >= params.theta_min && len <= params.r_max;
      if (ok) ok = !segment_intersects_boundary({v, seeds[j]}, boundary, skip);
      scores.set(i, j, s, ok);
    }
  }
  return scores;
}

namespace detail {

inline bool boxes_overlap(const Segment& s, const Segment& t) {
  return std::max(s.a.x, s.b.x) >= std::min(t.a.x, t.b.x) && std::max(t.a.x, t.b.x) >= std::min(s.a.x, s.b.x) &&
         std::max(s.a.y, s.b.y) >= std::min(t.a.y, t.b.y) && std::max(t.a.y, t.b.y) >= std::min(s.a.y, s.b.y);
}

}  // namespace detail

/// Iterative best-assignment with removal of crossing assignment vectors:
///   1. every vertex takes its best valid center (largest score);
///   2. while segments cross, drop the one with the smallest sum_k s_i/s_k
///      over its crossing partners (ties drop the lower vertex index);
///   3. dropped (vertex, center) entries become invalid; repeat from 1 until
///      a pass removes nothing.
/// Vertices left without valid entries stay unassigned.
inline Assignment assign_vertices(AssignmentScores scores, const ClosedBoundary& boundary,
                                  std::span<const Vec2> seeds) {
  const std::size_t n = scores.num_vertices();
  const std::size_t m = scores.num_centers();

  Assignment out;
  out.center.assign(n, kUnassigned);
  out.score.assign(n, 0.0);
  out.vector.assign(n, Vec2{});

  std::vector<Segment> seg(n);
  std::vector<std::vector<int>> crossing(n);

  auto best_center = [&](std::size_t i) {
    int best = kUnassigned;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      if (scores.valid(i, j) && scores.score(i, j) > best_score) {
        best_score = scores.score(i, j);
        best = static_cast<int>(j);
      }
    }
    return best;
  };
  auto refresh_crossings = [&](std::size_t i) {
    for (int k : crossing[i]) {
      auto& other = crossing[static_cast<std::size_t>(k)];
      other.erase(std::remove(other.begin(), other.end(), static_cast<int>(i)), other.end());
    }
    crossing[i].clear();
    if (out.center[i] == kUnassigned) return;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || out.center[k] == kUnassigned) continue;
      if (!detail::boxes_overlap(seg[i], seg[k])) continue;
      if (segments_properly_intersect(seg[i], seg[k])) {
        crossing[i].push_back(static_cast<int>(k));
        crossing[k].push_back(static_cast<int>(i));
      }
    }
  };
  auto apply = [&](std::size_t i, int c) {
    out.center[i] = c;
    if (c == kUnassigned) {
      out.score[i] = 0.0;
      out.vector[i] = Vec2{};
      seg[i] = Segment{};
    } else {
      const Vec2 target = seeds[static_cast<std::size_t>(c)];
      out.score[i] = scores.score(i, static_cast<std::size_t>(c));
      out.vector[i] = target - boundary.vertices[i];
      seg[i] = {boundary.vertices[i], target};
    }
  };

  // Step 1 for every vertex, then build the crossing graph once.
  for (std::size_t i = 0; i < n; ++i) apply(i, best_center(i));
  for (std::size_t i = 0; i < n; ++i) {
    if (out.center[i] == kUnassigned) continue;
    for (std::size_t k = i + 1; k < n; ++k) {
      if (out.center[k] == kUnassigned || !detail::boxes_overlap(seg[i], seg[k])) continue;
      if (segments_properly_intersect(seg[i], seg[k])) {
        crossing[i].push_back(static_cast<int>(k));
        crossing[k].push_back(static_cast<int>(i));
      }
    }
  }

  const std::size_t max_outer = n * m + 1;
  for (std::size_t outer = 0; outer < max_outer; ++outer) {
    ++out.outer_iterations;

    // Step 2 on a working copy of the crossing graph.
    std::vector<std::vector<int>> live = crossing;
    std::vector<char> removed(n, 0);
    std::vector<std::size_t> removed_list;
    while (true) {
      std::size_t pick = n;
      double pick_score = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (removed[i] || live[i].empty()) continue;
        double s = 0.0;
        for (int k : live[i]) s += out.score[i] / out.score[static_cast<std::size_t>(k)];
        if (s < pick_score) {
          pick_score = s;
          pick = i;
        }
      }
      if (pick == n) break;
      removed[pick] = 1;
      removed_list.push_back(pick);
      for (int k : live[pick]) {
        auto& other = live[static_cast<std::size_t>(k)];
        other.erase(std::remove(other.begin(), other.end(), static_cast<int>(pick)), other.end());
      }
      live[pick].clear();
    }
    if (removed_list.empty()) break;

    // Step 3: invalidate and reassign only the affected vertices.
    for (std::size_t i : removed_list) scores.invalidate(i, static_cast<std::size_t>(out.center[i]));
    for (std::size_t i : removed_list) apply(i, best_center(i));
    for (std::size_t i : removed_list) refresh_crossings(i);
  }
  return out;
}

/// Convenience: score matrix followed by the assignment loop.
inline Assignment assign(const ClosedBoundary& boundary, std::span<const Vec2> seeds, const AssignParams& params) {
  return assign_vertices(score_matrix(boundary, seeds, params), boundary, seeds);
}

}  // namespace declump
