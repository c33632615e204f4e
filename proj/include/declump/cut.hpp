#pragma once

#include <vector>

#include "core.hpp"
#include "geom.hpp"

namespace declump {

enum class CutKind { VertexVertex, VertexCenter, CenterCenter };

inline const char* to_string(CutKind kind) {
  switch (kind) {
    case CutKind::VertexVertex: return "vertex-vertex";
    case CutKind::VertexCenter: return "vertex-center";
    case CutKind::CenterCenter: return "center-center";
  }
  return "unknown";
}

/// A straight partition segment.
///
/// VertexVertex: both ends are boundary vertices (`index_a`, `index_b`).
/// VertexCenter: `a` is boundary vertex `index_a`, `b` is the center of
///   triangle `triangle_b` of the owning group.
/// CenterCenter: `a` and `b` are the centers of triangles `triangle_a` and
///   `triangle_b`.
/// `owner` is the seed index for vertex-vertex cuts and the group index
/// otherwise.
struct Cut {
  CutKind kind = CutKind::VertexVertex;
  Vec2 a;
  Vec2 b;
  int index_a = -1;
  int index_b = -1;
  int triangle_a = -1;
  int triangle_b = -1;
  int owner = -1;

  Segment segment() const { return {a, b}; }
  double length() const { return distance(a, b); }

  /// Boundary vertex indices touched by this cut (0, 1 or 2 of them).
  std::vector<int> boundary_indices() const {
    std::vector<int> out;
    if (index_a >= 0) out.push_back(index_a);
    if (index_b >= 0) out.push_back(index_b);
    return out;
  }
};

/// Curvature with negative values scaled by `factor`, the concavity bias
/// used by both cut optimizers. Stored curvature is never modified.
inline double biased_curvature(double kappa, double factor) { return kappa < 0.0 ? factor * kappa : kappa; }

}  // namespace declump
