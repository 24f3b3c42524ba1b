#pragma once

// Elementary types shared across the omctrack core modules.

#include <cmath>
#include <stdexcept>

namespace omc {

/// Point or offset on the reference plane. Components in meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }

inline double norm_sq(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Thrown when a beacon geometry yields a linear system of rank below 2
/// (collinear spot centers). The corresponding estimate or error bound is
/// undefined, formally infinite.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace omc
