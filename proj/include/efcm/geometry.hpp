#pragma once

#include <cmath>

namespace efcm {

/// Planar coordinates in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
  }
};

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Euclidean distance in meters.
inline double distance(const Point& a, const Point& b) {
  return std::sqrt(squared_distance(a, b));
}

}  // namespace efcm
