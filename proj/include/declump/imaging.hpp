#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "core.hpp"
#include "geom.hpp"

namespace declump {

enum class FieldKind { Intensity, GradientMagnitude, Inverted, Generic };

/// Grayscale raster of real samples. Intensity fields hold values in (0, 1].
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int width, int height, double fill = 0.0, FieldKind kind = FieldKind::Intensity)
      : values_(width, height, fill), kind_(kind) {}
  ScalarField(Raster<double> values, FieldKind kind) : values_(std::move(values)), kind_(kind) {}

  int width() const noexcept { return values_.width(); }
  int height() const noexcept { return values_.height(); }
  bool empty() const noexcept { return values_.empty(); }
  FieldKind kind() const noexcept { return kind_; }
  void set_kind(FieldKind kind) noexcept { kind_ = kind; }

  double& operator()(int x, int y) { return values_(x, y); }
  double operator()(int x, int y) const { return values_(x, y); }
  /// Edge-replicated access.
  double clamped(int x, int y) const {
    return values_(std::clamp(x, 0, width() - 1), std::clamp(y, 0, height() - 1));
  }

  const Raster<double>& raster() const noexcept { return values_; }
  Raster<double>& raster() noexcept { return values_; }

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  Raster<double> values_;
  FieldKind kind_ = FieldKind::Intensity;
};

/// Normalized Gaussian taps for offsets -r..r, r = ceil(3 sigma).
inline std::vector<double> gaussian_kernel(double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double w = std::exp(-0.5 * i * i / (sigma * sigma));
    k[static_cast<std::size_t>(i + r)] = w;
    sum += w;
  }
  for (double& w : k) w /= sum;
  return k;
}

/// Derivative-of-Gaussian taps (applied as correlation) scaled so that a unit
/// ramp has derivative exactly 1.
inline std::vector<double> gaussian_derivative_kernel(double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double moment = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double g = std::exp(-0.5 * i * i / (sigma * sigma));
    k[static_cast<std::size_t>(i + r)] = i * g;
    moment += static_cast<double>(i) * i * g;
  }
  for (double& w : k) w /= moment;
  return k;
}

/// out(x, y) = sum_k in(x + k, y) * taps[k + r] along one axis, edge replicated.
inline ScalarField correlate_axis(const ScalarField& in, const std::vector<double>& taps, bool along_x) {
  const int r = static_cast<int>(taps.size() / 2);
  ScalarField out(in.width(), in.height(), 0.0, in.kind());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        acc += taps[static_cast<std::size_t>(k + r)] * (along_x ? in.clamped(x + k, y) : in.clamped(x, y + k));
      }
      out(x, y) = acc;
    }
  }
  return out;
}

/// Correlation with an antisymmetric kernel, taking differences of mirrored
/// samples first so that a locally constant input gives exactly zero.
inline ScalarField differentiate_axis(const ScalarField& in, const std::vector<double>& taps, bool along_x) {
  const int r = static_cast<int>(taps.size() / 2);
  ScalarField out(in.width(), in.height(), 0.0, in.kind());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      double acc = 0.0;
      for (int k = 1; k <= r; ++k) {
        const double diff = along_x ? in.clamped(x + k, y) - in.clamped(x - k, y) : in.clamped(x, y + k) - in.clamped(x, y - k);
        acc += taps[static_cast<std::size_t>(k + r)] * diff;
      }
      out(x, y) = acc;
    }
  }
  return out;
}

inline ScalarField gaussian_blur(const ScalarField& field, double sigma) {
  if (field.empty()) throw Error(ErrorCode::EmptyField, "cannot blur an empty field");
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidConfig, "blur sigma must be positive");
  const auto taps = gaussian_kernel(sigma);
  return correlate_axis(correlate_axis(field, taps, true), taps, false);
}

/// Offsets of the discrete disk {(dx, dy) : dx^2 + dy^2 <= r^2}.
inline std::vector<std::pair<int, int>> disk_offsets(double radius) {
  std::vector<std::pair<int, int>> out;
  const int r = static_cast<int>(std::floor(radius));
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy <= radius * radius + 1e-9) out.emplace_back(dx, dy);
    }
  }
  return out;
}

namespace detail {

// Neighbourhoods are restricted to the raster so that dilation and erosion
// stay adjoint and the closing is exactly idempotent.
template <typename Pick>
ScalarField rank_filter(const ScalarField& in, const std::vector<std::pair<int, int>>& offsets, Pick pick) {
  ScalarField out(in.width(), in.height(), 0.0, in.kind());
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      double v = in(x, y);
      for (const auto& [dx, dy] : offsets) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= in.width() || ny >= in.height()) continue;
        v = pick(v, in(nx, ny));
      }
      out(x, y) = v;
    }
  }
  return out;
}

}  // namespace detail

inline ScalarField dilate(const ScalarField& in, double radius) {
  return detail::rank_filter(in, disk_offsets(radius), [](double a, double b) { return std::max(a, b); });
}

inline ScalarField erode(const ScalarField& in, double radius) {
  return detail::rank_filter(in, disk_offsets(radius), [](double a, double b) { return std::min(a, b); });
}

inline ScalarField morphological_close(const ScalarField& in, double radius) { return erode(dilate(in, radius), radius); }

/// Blur, derivative-of-Gaussian along each axis, magnitude, then closing
/// with a disk.
inline ScalarField gradient_magnitude(const ScalarField& intensity, double blur_sigma = 1.0,
                                      double derivative_sigma = 1.0, double closing_radius = 3.0) {
  const ScalarField smooth = gaussian_blur(intensity, blur_sigma);
  const auto d = gaussian_derivative_kernel(derivative_sigma);
  const ScalarField gx = differentiate_axis(smooth, d, true);
  const ScalarField gy = differentiate_axis(smooth, d, false);
  ScalarField g(intensity.width(), intensity.height(), 0.0, FieldKind::GradientMagnitude);
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) g(x, y) = std::hypot(gx(x, y), gy(x, y));
  }
  ScalarField closed = closing_radius > 0.0 ? morphological_close(g, closing_radius) : g;
  closed.set_kind(FieldKind::GradientMagnitude);
  return closed;
}

inline constexpr double kMinIntensity = 1.0 / 255.0;

/// 1 / max(blur(I), 1/255); values lie in [1, 255] for intensities in [0, 1].
inline ScalarField inverted_image(const ScalarField& intensity, double blur_sigma = 1.0) {
  ScalarField out = blur_sigma > 0.0 ? gaussian_blur(intensity, blur_sigma) : intensity;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out(x, y) = 1.0 / std::max(out(x, y), kMinIntensity);
  }
  out.set_kind(FieldKind::Inverted);
  return out;
}

/// Bilinear interpolation; positions outside the raster are clamped to the
/// nearest pixel and reported through `clamped`.
inline double bilinear(const ScalarField& f, Vec2 p, bool* clamped = nullptr) {
  const double maxx = f.width() - 1;
  const double maxy = f.height() - 1;
  const double x = std::clamp(p.x, 0.0, maxx);
  const double y = std::clamp(p.y, 0.0, maxy);
  if (clamped != nullptr && (x != p.x || y != p.y)) *clamped = true;
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, f.width() - 1);
  const int y1 = std::min(y0 + 1, f.height() - 1);
  const double tx = x - x0;
  const double ty = y - y0;
  const double top = f(x0, y0) * (1.0 - tx) + f(x1, y0) * tx;
  const double bot = f(x0, y1) * (1.0 - tx) + f(x1, y1) * tx;
  return top * (1.0 - ty) + bot * ty;
}

struct SegmentSamples {
  double sum = 0.0;
  int count = 0;
  bool clamped = false;

  double mean() const { return count > 0 ? sum / count : 0.0; }
};

/// ceil(length) + 1 evenly spaced samples (spacing <= 1 px) including both
/// endpoints; a zero-length segment yields one sample.
inline SegmentSamples sample_segment(const ScalarField& field, const Segment& seg) {
  if (field.empty()) throw Error(ErrorCode::EmptyField, "cannot sample an empty field");
  SegmentSamples out;
  const int steps = static_cast<int>(std::ceil(distance(seg.a, seg.b)));
  for (int k = 0; k <= steps; ++k) {
    const double t = steps == 0 ? 0.0 : static_cast<double>(k) / steps;
    out.sum += bilinear(field, seg.a + (seg.b - seg.a) * t, &out.clamped);
    ++out.count;
  }
  return out;
}

inline double sample_along_segment(const ScalarField& field, const Segment& seg) { return sample_segment(field, seg).mean(); }

}  // namespace declump
