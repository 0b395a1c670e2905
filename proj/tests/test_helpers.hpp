#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "levelset/geometry.hpp"
#include "levelset/rng.hpp"

namespace levelset::testing {

// Distance from x to the nearest of `count` uniformly sampled boundary
// points: an implementation-independent oracle for metric projections.
inline double dense_boundary_distance(const ConvexBody& body, Vec2 x, int count) {
  const Vec2 c = body.center2();
  double best = 1e300;
  for (int i = 0; i < count; ++i) {
    const double theta = 2.0 * 3.14159265358979323846 * i / count;
    const Vec2 p = c + body.radial_extent(theta) * Vec2{std::cos(theta), std::sin(theta)};
    best = std::min(best, norm(x - p));
  }
  return best;
}

// Smallest circle through two or three points.
inline Ball circle_through(Vec2 a, Vec2 b) {
  return {{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}, 0.5 * norm(a - b)};
}

inline bool circumcircle(Vec2 a, Vec2 b, Vec2 c, Ball* out) {
  const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  if (std::abs(d) < 1e-14) return false;
  const double na = norm_sq(a), nb = norm_sq(b), nc = norm_sq(c);
  const Vec2 center{(na * (b.y - c.y) + nb * (c.y - a.y) + nc * (a.y - b.y)) / d,
                    (na * (c.x - b.x) + nb * (a.x - c.x) + nc * (b.x - a.x)) / d};
  out->center = center;
  out->radius = norm(a - center);
  return true;
}

// Exact minimal enclosing ball of all points, brute force over candidate
// circles defined by pairs and triples (n small).
inline Ball minimal_enclosing_ball(const std::vector<Vec2>& pts) {
  const auto covers = [&](const Ball& ball) {
    const double r2 = ball.radius * ball.radius * (1.0 + 1e-12) + 1e-18;
    for (const Vec2& p : pts) {
      if (norm_sq(p - ball.center) > r2) return false;
    }
    return true;
  };
  Ball best{{0, 0}, 1e300};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Ball b2 = circle_through(pts[i], pts[j]);
      if (b2.radius < best.radius && covers(b2)) best = b2;
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        Ball b3{{0, 0}, 0};
        if (circumcircle(pts[i], pts[j], pts[k], &b3) && b3.radius < best.radius &&
            covers(b3)) {
          best = b3;
        }
      }
    }
  }
  return best;
}

// Smallest ball containing at least k of the points, by exhaustive scan
// over pair/triple-defined candidate circles (test oracle).
inline Ball smallest_ball_with_k(const std::vector<Vec2>& pts, long long k) {
  const auto count_in = [&](const Ball& ball) {
    const double r2 = ball.radius * ball.radius * (1.0 + 1e-12) + 1e-18;
    long long c = 0;
    for (const Vec2& p : pts) c += norm_sq(p - ball.center) <= r2 ? 1 : 0;
    return c;
  };
  Ball best{{0, 0}, 1e300};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Ball b2 = circle_through(pts[i], pts[j]);
      if (b2.radius < best.radius && count_in(b2) >= k) best = b2;
      for (std::size_t l = j + 1; l < pts.size(); ++l) {
        Ball b3{{0, 0}, 0};
        if (circumcircle(pts[i], pts[j], pts[l], &b3) && b3.radius < best.radius &&
            count_in(b3) >= k) {
          best = b3;
        }
      }
    }
  }
  return best;
}

// Random double on a dyadic lattice, so that differences and sums are exact.
inline double lattice_uniform(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng.next_u64() % (1u << 20)) / (1u << 20);
  return lo + (hi - lo) * u;
}

}  // namespace levelset::testing
