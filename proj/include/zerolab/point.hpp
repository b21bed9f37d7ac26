#pragma once

#include <array>
#include <cmath>

namespace zerolab {

/// Largest dimension handled by the point-based routines (quadrature and simulation).
inline constexpr int kMaxDim = 3;

/// A point of R^d, d <= kMaxDim, stored inline.
struct Point {
  std::array<double, kMaxDim> c{};
  int dim = 1;

  Point() = default;
  explicit Point(int d) : dim(d) {}

  /// The point r * e_axis (axis counted from 1).
  static Point on_axis(int d, double r, int axis = 1) {
    Point p(d);
    p.c[axis - 1] = r;
    return p;
  }

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += c[i] * c[i];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  Point& operator+=(const Point& o) {
    for (int i = 0; i < dim; ++i) c[i] += o.c[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    for (int i = 0; i < dim; ++i) c[i] -= o.c[i];
    return *this;
  }
  Point& operator*=(double s) {
    for (int i = 0; i < dim; ++i) c[i] *= s;
    return *this;
  }
};

inline Point operator+(Point a, const Point& b) { return a += b; }
inline Point operator-(Point a, const Point& b) { return a -= b; }
inline Point operator*(double s, Point a) { return a *= s; }

}  // namespace zerolab
