#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace nearfield {

/// Point or vector in the vehicle frame [m]: x forward, y left, z up from the ground.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr Vec3 operator*(double s, const Vec3& a) { return a * s; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double squared_norm(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(squared_norm(a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Lexicographic (x, y, z) ordering.
inline bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

/// Axis-aligned bounding box. Extents follow the object-size naming:
/// width along y, height along z, depth along x.
struct Aabb {
  Vec3 min;
  Vec3 max;

  double width() const { return max.y - min.y; }
  double height() const { return max.z - min.z; }
  double depth() const { return max.x - min.x; }
  double max_extent() const { return std::max({width(), height(), depth()}); }

  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
  }
  bool contains(const Aabb& other) const { return contains(other.min) && contains(other.max); }
};

/// Tight box around a nonempty point set.
inline Aabb bounding_box(std::span<const Vec3> points) {
  Aabb box{points.front(), points.front()};
  for (const Vec3& p : points) {
    box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y), std::min(box.min.z, p.z)};
    box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y), std::max(box.max.z, p.z)};
  }
  return box;
}

inline Aabb merge(const Aabb& a, const Aabb& b) {
  return {{std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y), std::min(a.min.z, b.min.z)},
          {std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y), std::max(a.max.z, b.max.z)}};
}

constexpr double kPi = 3.14159265358979323846;
constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double kmh_to_mps(double kmh) { return kmh / 3.6; }

}  // namespace nearfield
