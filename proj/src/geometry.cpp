#include "levelset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "levelset/errors.hpp"
#include "levelset/rng.hpp"

namespace levelset {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Area of the intersection of two discs with center distance dist.
double disc_lens_area(double dist, double r1, double r2) {
  if (dist >= r1 + r2) return 0.0;
  if (dist <= std::abs(r1 - r2)) {
    const double r = std::min(r1, r2);
    return kPi * r * r;
  }
  const double a1 = std::acos(std::clamp(
      (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp(
      (dist * dist + r2 * r2 - r1 * r1) / (2.0 * dist * r2), -1.0, 1.0));
  const double k = (-dist + r1 + r2) * (dist + r1 - r2) * (dist - r1 + r2) *
                   (dist + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

struct Box {
  double xlo, xhi, ylo, yhi;
};

Box bounding_box(const ConvexBody& b) {
  if (b.is_ball()) {
    const Ball& ball = b.ball();
    return {ball.center.x - ball.radius, ball.center.x + ball.radius,
            ball.center.y - ball.radius, ball.center.y + ball.radius};
  }
  const Ellipsoid& e = b.ellipsoid();
  const double hx = std::sqrt(e.shape.a);
  const double hy = std::sqrt(e.shape.c);
  return {e.center.x - hx, e.center.x + hx, e.center.y - hy, e.center.y + hy};
}

}  // namespace

ConvexBody::ConvexBody(Interval iv) : repr_(iv) {
  if (!(iv.a <= iv.b)) throw InvalidParameter("interval requires a <= b");
}

ConvexBody::ConvexBody(Ball ball) : repr_(ball) {
  if (!(ball.radius > 0.0)) throw InvalidParameter("ball requires radius > 0");
}

ConvexBody::ConvexBody(Ellipsoid ell) : repr_(ell) {
  const auto eig = eigen_sym2(ell.shape);
  if (!(eig.lambda2 > 0.0)) {
    throw InvalidParameter("ellipsoid shape matrix must be positive definite");
  }
}

int ConvexBody::dimension() const { return is_interval() ? 1 : 2; }

double ConvexBody::volume() const {
  if (is_interval()) return interval().b - interval().a;
  if (is_ball()) return kPi * ball().radius * ball().radius;
  return kPi * std::sqrt(ellipsoid().shape.det());
}

bool ConvexBody::contains(double x) const {
  const Interval& iv = interval();
  return iv.a <= x && x <= iv.b;
}

bool ConvexBody::contains(Vec2 x) const {
  if (is_ball()) {
    return norm_sq(x - ball().center) <= ball().radius * ball().radius;
  }
  const Ellipsoid& e = ellipsoid();
  const Vec2 w = x - e.center;
  return dot(w, e.shape.inverse().mul(w)) <= 1.0;
}

const Interval& ConvexBody::interval() const {
  if (!is_interval()) throw DimensionMismatch("body is not an interval");
  return std::get<Interval>(repr_);
}

const Ball& ConvexBody::ball() const {
  if (!is_ball()) throw UnsupportedBody("body is not a ball");
  return std::get<Ball>(repr_);
}

const Ellipsoid& ConvexBody::ellipsoid() const {
  if (!is_ellipsoid()) throw UnsupportedBody("body is not an ellipsoid");
  return std::get<Ellipsoid>(repr_);
}

Vec2 ConvexBody::center2() const {
  if (is_ball()) return ball().center;
  return ellipsoid().center;
}

double ConvexBody::center1() const {
  const Interval& iv = interval();
  return 0.5 * (iv.a + iv.b);
}

double ConvexBody::radial_extent(double theta) const {
  const Vec2 e{std::cos(theta), std::sin(theta)};
  if (is_ball()) return ball().radius;
  const Sym2 q_inv = ellipsoid().shape.inverse();
  return 1.0 / std::sqrt(dot(e, q_inv.mul(e)));
}

bool ConvexBody::line_intersect(Vec2 origin, Vec2 dir, double* t0,
                                double* t1) const {
  double qa, qb, qc;
  if (is_ball()) {
    const Vec2 w = origin - ball().center;
    qa = dot(dir, dir);
    qb = dot(dir, w);
    qc = dot(w, w) - ball().radius * ball().radius;
  } else if (is_ellipsoid()) {
    const Ellipsoid& e = ellipsoid();
    const Sym2 m = e.shape.inverse();
    const Vec2 w = origin - e.center;
    qa = dot(dir, m.mul(dir));
    qb = dot(dir, m.mul(w));
    qc = dot(w, m.mul(w)) - 1.0;
  } else {
    throw UnsupportedBody("line_intersect requires a 2D body");
  }
  const double disc = qb * qb - qa * qc;
  if (disc < 0.0) return false;
  const double root = std::sqrt(disc);
  *t0 = (-qb - root) / qa;
  *t1 = (-qb + root) / qa;
  return true;
}

bool ConvexBody::ray_intersect(Vec2 origin, Vec2 dir, double* t_enter,
                               double* t_exit) const {
  double t0, t1;
  if (!line_intersect(origin, dir, &t0, &t1)) return false;
  if (t1 < 0.0) return false;
  *t_enter = std::max(0.0, t0);
  *t_exit = t1;
  return true;
}

std::string ConvexBody::describe() const {
  char buf[160];
  if (is_interval()) {
    std::snprintf(buf, sizeof buf, "interval[%.12g, %.12g]", interval().a,
                  interval().b);
  } else if (is_ball()) {
    std::snprintf(buf, sizeof buf, "ball{(%.12g, %.12g), r=%.12g}",
                  ball().center.x, ball().center.y, ball().radius);
  } else {
    const Ellipsoid& e = ellipsoid();
    std::snprintf(buf, sizeof buf,
                  "ellipsoid{(%.12g, %.12g), [%.12g %.12g; %.12g %.12g]}",
                  e.center.x, e.center.y, e.shape.a, e.shape.b, e.shape.b,
                  e.shape.c);
  }
  return buf;
}

namespace {

BoundaryProjection project_interval(const Interval& iv, double x) {
  if (iv.a == iv.b) {
    // Degenerate interval: projection is defined by the side of a.
    if (x == iv.a) throw SkeletonPoint("x equals the degenerate interval point");
    const double u = x > iv.a ? 1.0 : -1.0;
    return {{iv.a, 0.0}, {u, 0.0}, std::abs(x - iv.a)};
  }
  const double mid = 0.5 * (iv.a + iv.b);
  if (x == mid) throw SkeletonPoint("x is the interval midpoint");
  if (x < mid) {
    // Nearest boundary point a, outer normal -1; s = a - x is positive
    // outside (x < a) and negative inside.
    return {{iv.a, 0.0}, {-1.0, 0.0}, iv.a - x};
  }
  return {{iv.b, 0.0}, {1.0, 0.0}, x - iv.b};
}

BoundaryProjection project_ball(const Ball& ball, Vec2 x) {
  const Vec2 w = x - ball.center;
  const double dist = norm(w);
  if (dist == 0.0) throw SkeletonPoint("x is the ball center");
  const Vec2 u{w.x / dist, w.y / dist};
  return {ball.center + ball.radius * u, u, dist - ball.radius};
}

// Nearest-boundary-point for an ellipsoid via the Lagrange parameter t:
// p = (I + t Q^{-1})^{-1} x in centered coordinates, with
// g(t) = sum_i x_i^2 q_i / (q_i + t)^2 = 1 solved on (-q_min, inf).
// Newton iteration with a bisection fallback.
BoundaryProjection project_ellipsoid(const Ellipsoid& ell, Vec2 x) {
  const Vec2 w = x - ell.center;
  if (w.x == 0.0 && w.y == 0.0) throw SkeletonPoint("x is the ellipsoid center");

  const EigenSym2 eig = eigen_sym2(ell.shape);
  const double q1 = eig.lambda1, q2 = eig.lambda2;
  const double x1 = dot(w, eig.v1), x2 = dot(w, eig.v2);

  Vec2 p_eig;
  if (x2 == 0.0 && -q1 + std::abs(x1) * std::sqrt(q1) <= -q2) {
    // On the major axis inside the evolute: the nearest boundary point is
    // off the axis and two-fold symmetric; the tie is broken toward +v2.
    const double p1 = x1 * q1 / (q1 - q2);
    p_eig = {p1, std::sqrt(std::max(0.0, q2 * (1.0 - p1 * p1 / q1)))};
  } else {
    const auto g = [&](double t) {
      const double d1 = q1 + t, d2 = q2 + t;
      return x1 * x1 * q1 / (d1 * d1) + x2 * x2 * q2 / (d2 * d2);
    };
    const auto gprime = [&](double t) {
      const double d1 = q1 + t, d2 = q2 + t;
      return -2.0 *
             (x1 * x1 * q1 / (d1 * d1 * d1) + x2 * x2 * q2 / (d2 * d2 * d2));
    };

    double lo = -q2 * (1.0 - 1e-12);
    double hi = std::max(0.0, std::sqrt(x1 * x1 * q1 + x2 * x2 * q2) - q2);
    while (g(hi) > 1.0) hi = 2.0 * hi + q2 + 1.0;

    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
      const double val = g(t) - 1.0;
      if (std::abs(val) <= 1e-13) break;
      if (val > 0.0) {
        lo = t;
      } else {
        hi = t;
      }
      double next = t - val / gprime(t);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-12 * (1.0 + std::abs(t))) {
        t = next;
        break;
      }
      t = next;
    }
    p_eig = {x1 * q1 / (q1 + t), x2 * q2 / (q2 + t)};
  }
  const Vec2 pi = ell.center + p_eig.x * eig.v1 + p_eig.y * eig.v2;
  // Outer normal direction Q^{-1} p, expressed back in world coordinates.
  const Vec2 n_eig{p_eig.x / q1, p_eig.y / q2};
  Vec2 u = n_eig.x * eig.v1 + n_eig.y * eig.v2;
  const double nu = norm(u);
  u = {u.x / nu, u.y / nu};
  const double inside = dot(w, ell.shape.inverse().mul(w));
  const double s = (inside > 1.0 ? 1.0 : -1.0) * norm(x - pi);
  return {pi, u, s};
}

}  // namespace

BoundaryProjection project(const ConvexBody& body, double x) {
  return project_interval(body.interval(), x);
}

BoundaryProjection project(const ConvexBody& body, Vec2 x) {
  if (body.dimension() != 2) throw DimensionMismatch("2D point, 1D body");
  if (body.volume() == 0.0) throw DegenerateBody(body.describe());
  if (body.is_ball()) return project_ball(body.ball(), x);
  return project_ellipsoid(body.ellipsoid(), x);
}

namespace {

// max_x in boundary(a) dist(x, b), dist being the point-to-set distance.
double directed_boundary_distance(const ConvexBody& a, const ConvexBody& b,
                                  int grid) {
  const Vec2 c = a.center2();
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double theta = 2.0 * kPi * static_cast<double>(i) / grid;
    const Vec2 x = c + a.radial_extent(theta) * Vec2{std::cos(theta), std::sin(theta)};
    double d;
    try {
      d = std::max(0.0, project(b, x).s);
    } catch (const SkeletonPoint&) {
      d = 0.0;  // boundary point coincides with b's center: inside b
    }
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const ConvexBody& a, const ConvexBody& b,
                          int boundary_grid) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatch("hausdorff_distance across dimensions");
  }
  if (a.is_interval()) {
    return std::max(std::abs(a.interval().a - b.interval().a),
                    std::abs(a.interval().b - b.interval().b));
  }
  if (a.is_ball() && b.is_ball()) {
    return norm(a.ball().center - b.ball().center) +
           std::abs(a.ball().radius - b.ball().radius);
  }
  return std::max(directed_boundary_distance(a, b, boundary_grid),
                  directed_boundary_distance(b, a, boundary_grid));
}

double sym_diff_volume(const ConvexBody& a, const ConvexBody& b,
                       std::uint64_t qmc_offset) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatch("sym_diff_volume across dimensions");
  }
  if (a.is_interval()) {
    const Interval& p = a.interval();
    const Interval& q = b.interval();
    const double inter =
        std::max(0.0, std::min(p.b, q.b) - std::max(p.a, q.a));
    return (p.b - p.a) + (q.b - q.a) - 2.0 * inter;
  }
  if (a.is_ball() && b.is_ball()) {
    const double dist = norm(a.ball().center - b.ball().center);
    const double r1 = a.ball().radius, r2 = b.ball().radius;
    return kPi * (r1 * r1 + r2 * r2) - 2.0 * disc_lens_area(dist, r1, r2);
  }

  // Quasi-Monte Carlo over the union bounding box, doubling the point count
  // until two successive estimates agree to 1e-3 relative.
  const Box ba = bounding_box(a), bb = bounding_box(b);
  const Box box{std::min(ba.xlo, bb.xlo), std::max(ba.xhi, bb.xhi),
                std::min(ba.ylo, bb.ylo), std::max(ba.yhi, bb.yhi)};
  const double area = (box.xhi - box.xlo) * (box.yhi - box.ylo);
  Halton2 seq(qmc_offset);
  std::size_t n = 0;
  std::size_t hits = 0;
  double prev = -1.0;
  for (std::size_t target = 1u << 15; target <= (1u << 21); target <<= 1) {
    for (; n < target; ++n) {
      const auto [u, v] = seq.next();
      const Vec2 p{box.xlo + u * (box.xhi - box.xlo),
                   box.ylo + v * (box.yhi - box.ylo)};
      if (a.contains(p) != b.contains(p)) ++hits;
    }
    const double est = area * static_cast<double>(hits) / static_cast<double>(n);
    if (prev >= 0.0 && std::abs(est - prev) <= 1e-3 * std::max(est, 1e-9)) {
      return est;
    }
    prev = est;
  }
  return prev;
}

double parallel_set_volume(const ConvexBody& body, double eps, ParallelSide side) {
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  double outer, inner, inradius;
  if (body.is_interval()) {
    inradius = 0.5 * (body.interval().b - body.interval().a);
    outer = 2.0 * eps;
    inner = 2.0 * eps;
  } else if (body.is_ball()) {
    const double r = body.ball().radius;
    inradius = r;
    outer = 2.0 * kPi * r * eps + kPi * eps * eps;
    inner = 2.0 * kPi * r * eps - kPi * eps * eps;
  } else {
    throw UnsupportedBody("parallel_set_volume: " + body.describe());
  }
  if (side == ParallelSide::outer) return outer;
  if (eps >= inradius) throw EpsTooLarge("eps >= inradius");
  return side == ParallelSide::inner ? inner : outer + inner;
}

SteinerData steiner_data(const ConvexBody& body) {
  SteinerData data;
  if (body.is_interval()) {
    const double half = 0.5 * (body.interval().b - body.interval().a);
    data.surface_measure = 2.0;  // nu_0 mass 1 at each endpoint
    data.inner_reach = [half](double) { return half; };
    return data;
  }
  if (body.is_ball()) {
    const double r = body.ball().radius;
    data.surface_measure = 2.0 * kPi * r;
    data.lower_support_masses = {2.0 * kPi};  // total curvature of a convex body
    data.inner_reach = [r](double) { return r; };
    return data;
  }
  throw UnsupportedBody("steiner_data: " + body.describe());
}

double square_parallel_volume(double side, double eps, ParallelSide which) {
  if (!(side > 0.0) || !(eps > 0.0)) throw InvalidParameter("side, eps > 0");
  const double outer = 4.0 * side * eps + kPi * eps * eps;
  if (which == ParallelSide::outer) return outer;
  if (eps >= 0.5 * side) throw EpsTooLarge("eps >= inradius of the square");
  const double inner = 4.0 * side * eps - 4.0 * eps * eps;
  return which == ParallelSide::inner ? inner : outer + inner;
}

SteinerData square_steiner_data(double side) {
  if (!(side > 0.0)) throw InvalidParameter("side > 0");
  SteinerData data;
  data.surface_measure = 4.0 * side;
  data.lower_support_masses = {2.0 * kPi};  // exterior angles sum to 2*pi
  // Boundary parameter = arc length along the perimeter; the local inner
  // reach is capped by the distance to the nearest corner and the inradius.
  data.inner_reach = [side](double arc) {
    double pos = std::fmod(arc, side);
    if (pos < 0.0) pos += side;
    return std::min(std::min(pos, side - pos), 0.5 * side);
  };
  return data;
}

}  // namespace levelset
