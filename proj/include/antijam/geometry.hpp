#pragma once

#include <cmath>

namespace antijam {

/// Horizontal ground coordinate in meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// 3D position in meters; z is altitude (0 for ground nodes).
struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline double planar_distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance(const Position3& a, const Position3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

inline bool finite(const Vec2& v) {
  return std::isfinite(v.x) && std::isfinite(v.y);
}

inline bool finite(const Position3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

}  // namespace antijam
