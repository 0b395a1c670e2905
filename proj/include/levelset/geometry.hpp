#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "levelset/vec.hpp"

namespace levelset {

// Parametric convex bodies. These carry the target level set L_lambda and
// every candidate set handled by the estimators, so the geometry here is the
// shared substrate of the whole library.

struct Interval {
  double a = 0.0;
  double b = 0.0;  // requires a <= b; a == b is a legal degenerate output
};

struct Ball {
  Vec2 center;
  double radius = 1.0;  // > 0
};

// { x : (x - center)^T shape^{-1} (x - center) <= 1 }; semi-axes are the
// square roots of the eigenvalues of shape.
struct Ellipsoid {
  Vec2 center;
  Sym2 shape;
};

class ConvexBody {
 public:
  ConvexBody() : repr_(Interval{}) {}
  ConvexBody(Interval iv);      // NOLINT: implicit by design
  ConvexBody(Ball ball);        // NOLINT
  ConvexBody(Ellipsoid ell);    // NOLINT

  int dimension() const;
  double volume() const;
  bool contains(double x) const;
  bool contains(Vec2 x) const;

  bool is_interval() const { return std::holds_alternative<Interval>(repr_); }
  bool is_ball() const { return std::holds_alternative<Ball>(repr_); }
  bool is_ellipsoid() const { return std::holds_alternative<Ellipsoid>(repr_); }

  const Interval& interval() const;
  const Ball& ball() const;
  const Ellipsoid& ellipsoid() const;

  // Center of symmetry (midpoint for intervals); the skeleton point.
  Vec2 center2() const;
  double center1() const;

  // Radius of the body in direction theta from its center (2D bodies).
  double radial_extent(double theta) const;

  // Intersection of the ray origin + t*dir (t >= 0) with the body, as
  // [t_enter, t_exit]; returns false when the ray misses.
  bool ray_intersect(Vec2 origin, Vec2 dir, double* t_enter, double* t_exit) const;

  // Unclamped line intersection: both roots t0 <= t1 of the boundary
  // quadratic along origin + t*dir; false when the line misses.
  bool line_intersect(Vec2 origin, Vec2 dir, double* t0, double* t1) const;

  std::string describe() const;

 private:
  std::variant<Interval, Ball, Ellipsoid> repr_;
};

// Metric projection onto the boundary, with the outward-positive signed
// distance: x = pi + s * u, s > 0 iff x lies outside the body.
struct BoundaryProjection {
  Vec2 pi;   // nearest boundary point (pi.y unused in 1D)
  Vec2 u;    // outer unit normal at pi
  double s;  // signed distance, positive outside
};

BoundaryProjection project(const ConvexBody& body, double x);
BoundaryProjection project(const ConvexBody& body, Vec2 x);

double hausdorff_distance(const ConvexBody& a, const ConvexBody& b,
                          int boundary_grid = 2048);

// Lebesgue measure of the symmetric difference. Exact for interval pairs and
// ball pairs; quasi-Monte Carlo (Halton) for pairs involving an ellipsoid.
double sym_diff_volume(const ConvexBody& a, const ConvexBody& b,
                       std::uint64_t qmc_offset = 0);

enum class ParallelSide { outer, inner, both };

// Volume of the eps-parallel shell on the requested side; closed form for
// intervals and balls.
double parallel_set_volume(const ConvexBody& body, double eps, ParallelSide side);

// Support-measure data for the bodies with closed-form Steiner expansions.
struct SteinerData {
  double surface_measure = 0.0;                   // total nu_{d-1} mass
  std::vector<double> lower_support_masses;       // nu_{d-j} totals, j = 2..d
  std::function<double(double)> inner_reach;      // boundary parameter -> r(pi)

  // Coefficient of eps^2 in the outer shell expansion
  // vol(outer shell) = surface_measure * eps + quadratic_coefficient * eps^2.
  double quadratic_coefficient() const {
    return lower_support_masses.empty() ? 0.0 : 0.5 * lower_support_masses[0];
  }
};

SteinerData steiner_data(const ConvexBody& body);

// Axis-aligned square test fixture (not a ConvexBody variant; the estimator
// classes never produce one). Used to exercise the Steiner machinery on a
// body with corners.
double square_parallel_volume(double side, double eps, ParallelSide which);
SteinerData square_steiner_data(double side);

}  // namespace levelset
