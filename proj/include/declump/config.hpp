#pragma once

#include <cmath>

#include "assign.hpp"
#include "core.hpp"
#include "vccut.hpp"
#include "vvcut.hpp"

namespace declump {

/// Every tunable of the partitioning pipeline, with published defaults
/// where they exist.
struct Config {
  double R_max = 35.0;                 // px, max assignment distance
  double theta_min = 0.5;              // min normal . assignment direction
  double Theta_min = 20.0;             // degrees, min triangle angle
  double Theta_max = 110.0;            // degrees, max triangle angle
  double neighborhood_radius = 7.0;    // px of arc searched around cut ends
  double negative_curvature_factor = 5.0;
  double blur_sigma = 1.0;             // px
  double closing_radius = 3.0;         // px
  double curvature_window = 5.0;       // px half-width
  double curvature_smooth_sigma = 2.0; // px
  double normal_smooth_sigma = 2.0;    // px; 0 uses the raw contour

  double min_arc_to_chord = 2.0;       // vertex-vertex cut admissibility
  int min_piece_vertices = 0;          // shorter pieces are ignored
  int min_region_area = 10;            // px; smaller regions are merged
  double iou_threshold = 0.7;          // evaluation

  AssignParams assign_params() const { return {R_max, theta_min}; }
  AngleFilterParams angle_params() const { return {Theta_min, Theta_max}; }
  VVCutParams vv_params() const { return {R_max, neighborhood_radius, negative_curvature_factor, min_arc_to_chord, min_piece_vertices}; }
  VCCutParams vc_params() const { return {neighborhood_radius, negative_curvature_factor}; }
};

inline void validate(const Config& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be positive");
  };
  positive(c.R_max, "R_max");
  positive(c.Theta_min, "Theta_min");
  positive(c.Theta_max, "Theta_max");
  positive(c.neighborhood_radius, "neighborhood_radius");
  positive(c.negative_curvature_factor, "negative_curvature_factor");
  positive(c.blur_sigma, "blur_sigma");
  positive(c.closing_radius, "closing_radius");
  positive(c.curvature_window, "curvature_window");
  positive(c.curvature_smooth_sigma, "curvature_smooth_sigma");
  positive(c.min_arc_to_chord, "min_arc_to_chord");
  if (!(c.normal_smooth_sigma >= 0.0)) throw Error(ErrorCode::InvalidConfig, "normal_smooth_sigma must be non-negative");
  validate(c.assign_params());
  validate(c.angle_params());
  if (c.min_piece_vertices < 0) throw Error(ErrorCode::InvalidConfig, "min_piece_vertices must be non-negative");
  if (c.min_region_area < 0) throw Error(ErrorCode::InvalidConfig, "min_region_area must be non-negative");
  if (!(c.iou_threshold > 0.0 && c.iou_threshold <= 1.0)) throw Error(ErrorCode::InvalidConfig, "iou_threshold must lie in (0, 1]");
}

}  // namespace declump
