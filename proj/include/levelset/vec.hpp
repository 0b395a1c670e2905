#pragma once

#include <array>
#include <cmath>

namespace levelset {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm_sq(Vec2 a) { return a.x * a.x + a.y * a.y; }

// Symmetric 2x2 matrix [[a, b], [b, c]].
struct Sym2 {
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;

  double det() const { return a * c - b * b; }
  double trace() const { return a + c; }

  Vec2 mul(Vec2 v) const { return {a * v.x + b * v.y, b * v.x + c * v.y}; }

  // Inverse; caller guarantees det > 0.
  Sym2 inverse() const {
    const double d = det();
    return {c / d, -b / d, a / d};
  }
};

struct EigenSym2 {
  double lambda1;  // larger eigenvalue
  double lambda2;  // smaller eigenvalue
  Vec2 v1;         // unit eigenvector for lambda1
  Vec2 v2;         // unit eigenvector for lambda2
};

// Eigendecomposition of a symmetric 2x2 matrix (closed form).
inline EigenSym2 eigen_sym2(const Sym2& m) {
  const double half_tr = 0.5 * m.trace();
  const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - m.det()));
  EigenSym2 e;
  e.lambda1 = half_tr + disc;
  e.lambda2 = half_tr - disc;
  if (std::abs(m.b) > 1e-300) {
    Vec2 v{e.lambda1 - m.c, m.b};
    const double nv = norm(v);
    e.v1 = {v.x / nv, v.y / nv};
  } else if (m.a >= m.c) {
    e.v1 = {1.0, 0.0};
  } else {
    e.v1 = {0.0, 1.0};
  }
  e.v2 = {-e.v1.y, e.v1.x};
  return e;
}

}  // namespace levelset
