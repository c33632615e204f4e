#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace declump {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }
// Counter-clockwise quarter turn.
constexpr Vec2 perp_left(Vec2 a) { return {-a.y, a.x}; }

// Zero vector stays zero.
inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : Vec2{};
}

enum class ErrorCode {
  NotFound,
  AmbiguousRegion,
  TooSmall,
  InvalidBoundary,
  DegenerateVertex,
  BoundaryTooShort,
  DuplicateSeed,
  EmptySeeds,
  EmptyField,
  SeedOutsideBoundary,
  ShapeMismatch,
  GenerationFailed,
  InvalidConfig,
  ParseError,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::AmbiguousRegion: return "AmbiguousRegion";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::InvalidBoundary: return "InvalidBoundary";
    case ErrorCode::DegenerateVertex: return "DegenerateVertex";
    case ErrorCode::BoundaryTooShort: return "BoundaryTooShort";
    case ErrorCode::DuplicateSeed: return "DuplicateSeed";
    case ErrorCode::EmptySeeds: return "EmptySeeds";
    case ErrorCode::EmptyField: return "EmptyField";
    case ErrorCode::SeedOutsideBoundary: return "SeedOutsideBoundary";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Dense row-major 2D grid. Pixel (x, y) has its center at coordinates (x, y).
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height),
        values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    if (width < 0 || height < 0) throw std::invalid_argument("negative raster size");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  template <typename U>
  bool same_shape(const Raster<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  T& operator()(int x, int y) { return values_[index(x, y)]; }
  const T& operator()(int x, int y) const { return values_[index(x, y)]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

using LabelImage = Raster<std::int32_t>;
using Mask = Raster<std::uint8_t>;

}  // namespace declump
