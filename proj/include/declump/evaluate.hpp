#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "core.hpp"

namespace declump {

struct Verdict {
  bool correct = false;
  std::string reason;                 // empty when correct
  int regions = 0;
  int objects = 0;
  std::vector<double> matched_iou;    // per matched pair, in region order
};

/// Maximum-weight perfect matching on a square matrix (Hungarian method).
/// Returns the column assigned to each row.
inline std::vector<int> max_weight_matching(const std::vector<std::vector<double>>& weight) {
  const int n = static_cast<int>(weight.size());
  if (n == 0) return {};
  // Minimise -weight; 1-based potentials as in the classic formulation.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = -weight[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return row_to_col;
}

/// Correct iff the region count equals the object count and every pair of the
/// IoU-maximizing one-to-one matching reaches `iou_threshold`.
inline Verdict evaluate_case(const LabelImage& result, const LabelImage& truth, double iou_threshold = 0.7) {
  if (!result.same_shape(truth)) throw Error(ErrorCode::ShapeMismatch, "result and truth rasters differ in size");

  std::map<int, int> region_id;
  std::map<int, int> object_id;
  for (std::size_t k = 0; k < result.size(); ++k) {
    const int r = result.values()[k];
    const int t = truth.values()[k];
    if (r > 0 && !region_id.count(r)) region_id.emplace(r, static_cast<int>(region_id.size()));
    if (t > 0 && !object_id.count(t)) object_id.emplace(t, static_cast<int>(object_id.size()));
  }
  // Map ids in label order for a label-agnostic but deterministic matrix.
  int idx = 0;
  for (auto& [l, id] : region_id) id = idx++;
  idx = 0;
  for (auto& [l, id] : object_id) id = idx++;

  Verdict v;
  v.regions = static_cast<int>(region_id.size());
  v.objects = static_cast<int>(object_id.size());
  if (v.regions != v.objects) {
    v.reason = "region count " + std::to_string(v.regions) + " != object count " + std::to_string(v.objects);
    return v;
  }
  const std::size_t n = region_id.size();
  std::vector<std::vector<double>> inter(n, std::vector<double>(n, 0.0));
  std::vector<double> area_r(n, 0.0), area_t(n, 0.0);
  for (std::size_t k = 0; k < result.size(); ++k) {
    const int r = result.values()[k];
    const int t = truth.values()[k];
    if (r > 0) area_r[static_cast<std::size_t>(region_id[r])] += 1.0;
    if (t > 0) area_t[static_cast<std::size_t>(object_id[t])] += 1.0;
    if (r > 0 && t > 0) inter[static_cast<std::size_t>(region_id[r])][static_cast<std::size_t>(object_id[t])] += 1.0;
  }
  std::vector<std::vector<double>> iou(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double uni = area_r[i] + area_t[j] - inter[i][j];
      iou[i][j] = uni > 0.0 ? inter[i][j] / uni : 0.0;
    }
  }
  const std::vector<int> match = max_weight_matching(iou);
  v.correct = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = iou[i][static_cast<std::size_t>(match[i])];
    v.matched_iou.push_back(q);
    if (q < iou_threshold && v.correct) {
      v.correct = false;
      v.reason = "matched IoU " + std::to_string(q) + " below threshold";
    }
  }
  return v;
}

}  // namespace declump
