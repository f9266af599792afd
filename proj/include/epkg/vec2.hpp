#pragma once

#include <algorithm>
#include <cmath>

namespace epkg {

struct Vec2 {
  double x = 0.0, y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double bracket(Vec2 a) { return std::sqrt(1.0 + a.x * a.x + a.y * a.y); }
/// a/|a|, zero at the origin.
inline Vec2 unit(Vec2 a) {
  const double r = norm(a);
  return r == 0.0 ? Vec2{} : Vec2{a.x / r, a.y / r};
}

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 0, b = 0, c = 0, d = 0;

  static Mat2 identity() { return {1, 0, 0, 1}; }
  double det() const { return a * d - b * c; }
  Mat2 inverse() const {
    const double k = 1.0 / det();
    return {d * k, -b * k, -c * k, a * k};
  }
  friend Vec2 operator*(const Mat2& m, Vec2 v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }
  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  friend Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
  friend Mat2 operator+(const Mat2& m, const Mat2& n) { return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d}; }

  /// Spectral norm (largest singular value).
  double op_norm() const {
    const double s = a * a + b * b + c * c + d * d;
    const double p = std::abs(det());
    return std::sqrt(0.5 * (s + std::sqrt(std::max(0.0, s * s - 4.0 * p * p))));
  }
};

}  // namespace epkg
