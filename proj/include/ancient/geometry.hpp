#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ancient {

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for every error raised by the library. `what()` names the
/// violated condition; subclasses carry a machine-readable code.
class LabError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 &operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2 &operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2 &operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Discretized plane curve. A closed curve wraps implicitly: the last
/// point connects to the first and is not repeated.
struct PolyCurve {
  std::vector<Vec2> points;
  bool closed = false;

  std::size_t size() const { return points.size(); }
  std::size_t edge_count() const {
    if (points.size() < 2) return 0;
    return closed ? points.size() : points.size() - 1;
  }
  Vec2 edge(std::size_t i) const {
    return points[(i + 1) % points.size()] - points[i];
  }
};

double length(const PolyCurve &c);

/// Signed exterior turning angle at each vertex (0 at open endpoints).
std::vector<double> turning_angles(const PolyCurve &c);

/// Reverses traversal direction; a closed curve keeps its first vertex.
PolyCurve reversed(const PolyCurve &c);

} // namespace ancient
